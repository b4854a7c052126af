#pragma once

#include "pbox/error.hpp"
#include "pbox/rational.hpp"
#include "pbox/scenario.hpp"
#include "pbox/serialize.hpp"
#include "pbox/exact_lp.hpp"
#include "pbox/polytope.hpp"
#include "pbox/clique.hpp"
#include "pbox/exclusivity.hpp"
#include "pbox/marginal.hpp"
#include "pbox/gm.hpp"
