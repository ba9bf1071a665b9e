// Copyright (c) 2026 The pmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PMOR_PMOR_HPP
#define PMOR_PMOR_HPP

#include "pmor/coeff_solver.hpp"
#include "pmor/errors.hpp"
#include "pmor/example_systems.hpp"
#include "pmor/interp_data.hpp"
#include "pmor/io.hpp"
#include "pmor/matrix_series.hpp"
#include "pmor/model.hpp"
#include "pmor/multiindex.hpp"
#include "pmor/rom_builder.hpp"
#include "pmor/verify.hpp"

#endif // PMOR_PMOR_HPP
