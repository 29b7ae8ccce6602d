#ifndef SUPERHAM_SUPERHAM_HPP
#define SUPERHAM_SUPERHAM_HPP

#include "superham/rational.hpp"
#include "superham/superpoly.hpp"
#include "superham/symbols.hpp"
#include "superham/varcalc.hpp"
#include "superham/diffop.hpp"
#include "superham/lie.hpp"
#include "superham/conformal.hpp"

#endif  // SUPERHAM_SUPERHAM_HPP
