#pragma once

#include "ddjacobi/diagnostics.hpp"
#include "ddjacobi/error.hpp"
#include "ddjacobi/homotopy.hpp"
#include "ddjacobi/io.hpp"
#include "ddjacobi/reference.hpp"
#include "ddjacobi/rotation.hpp"
#include "ddjacobi/solver.hpp"
#include "ddjacobi/spectral.hpp"
#include "ddjacobi/sym_matrix.hpp"
