#pragma once

#include "cuspsheaf/errors.hpp"
#include "cuspsheaf/field.hpp"
#include "cuspsheaf/series.hpp"
#include "cuspsheaf/matrix.hpp"
#include "cuspsheaf/series_matrix.hpp"
#include "cuspsheaf/cusp_ring.hpp"
#include "cuspsheaf/presentation.hpp"
#include "cuspsheaf/saturation.hpp"
#include "cuspsheaf/lattice.hpp"
#include "cuspsheaf/extension.hpp"
#include "cuspsheaf/triples.hpp"
#include "cuspsheaf/oracle.hpp"
#include "cuspsheaf/random.hpp"
