#ifndef MECM_MECM_HPP
#define MECM_MECM_HPP

#include "mecm/baselines.hpp"
#include "mecm/belief.hpp"
#include "mecm/community.hpp"
#include "mecm/credal.hpp"
#include "mecm/error.hpp"
#include "mecm/evaluation.hpp"
#include "mecm/generators.hpp"
#include "mecm/graph.hpp"
#include "mecm/io.hpp"

#endif  // MECM_MECM_HPP
