#pragma once

#include "angle.hpp"
#include "config.hpp"
#include "dual.hpp"
#include "geometry.hpp"
#include "green.hpp"
#include "intertwine.hpp"
#include "orbits.hpp"
#include "parabolic.hpp"
#include "poly.hpp"
#include "rays.hpp"
#include "render.hpp"
#include "renorm.hpp"
#include "report.hpp"
#include "roots.hpp"
#include "types.hpp"
