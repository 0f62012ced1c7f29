// Copyright 2026 The riskcore Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RISKCORE_RISKCORE_HPP_
#define RISKCORE_RISKCORE_HPP_

#include "riskcore/asymptotics.hpp"
#include "riskcore/core.hpp"
#include "riskcore/error.hpp"
#include "riskcore/estimators.hpp"
#include "riskcore/harness.hpp"
#include "riskcore/io.hpp"
#include "riskcore/numeric.hpp"
#include "riskcore/parallel.hpp"
#include "riskcore/population.hpp"
#include "riskcore/random.hpp"
#include "riskcore/spectra.hpp"

#endif  // RISKCORE_RISKCORE_HPP_
