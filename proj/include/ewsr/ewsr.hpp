// SPDX-License-Identifier: Apache-2.0
//
// ewsr-gap: expected weighted sum rate vs. massive-MIMO surrogate gap analysis
// Copyright (C) 2026 The ewsr-gap authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef EWSR_EWSR_HPP
#define EWSR_EWSR_HPP

#include "ewsr/channel.hpp"
#include "ewsr/error.hpp"
#include "ewsr/experiments.hpp"
#include "ewsr/gap.hpp"
#include "ewsr/linalg.hpp"
#include "ewsr/montecarlo.hpp"
#include "ewsr/oracle.hpp"
#include "ewsr/random.hpp"
#include "ewsr/rates.hpp"
#include "ewsr/scenario_io.hpp"
#include "ewsr/special.hpp"

#endif // EWSR_EWSR_HPP
