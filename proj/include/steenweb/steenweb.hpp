#ifndef STEENWEB_STEENWEB_HPP
#define STEENWEB_STEENWEB_HPP

// Umbrella header for the library.

#include "decompositions.hpp"
#include "error.hpp"
#include "field.hpp"
#include "linalg.hpp"
#include "periodicity.hpp"
#include "prime.hpp"
#include "random_ring.hpp"
#include "ring.hpp"
#include "ring_builders.hpp"
#include "ring_io.hpp"
#include "steenrod.hpp"
#include "web_checker.hpp"
#include "web_io.hpp"
#include "web_model.hpp"
#include "web_search.hpp"

#endif // STEENWEB_STEENWEB_HPP
