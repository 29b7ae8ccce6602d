#include "superham/frontend/cli.hpp"

int main(int argc, char** argv) { return superham::frontend::runMain(argc, argv); }
