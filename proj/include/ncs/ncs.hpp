/*
 * Copyright 2026 The NCS Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef NCS_NCS_HPP_
#define NCS_NCS_HPP_

#include "ncs/error.hpp"
#include "ncs/features.hpp"
#include "ncs/io.hpp"
#include "ncs/logistic.hpp"
#include "ncs/matrix.hpp"
#include "ncs/metrics.hpp"
#include "ncs/mi.hpp"
#include "ncs/pareto.hpp"
#include "ncs/probes.hpp"
#include "ncs/report.hpp"
#include "ncs/rng.hpp"
#include "ncs/significance.hpp"
#include "ncs/synth.hpp"

#endif  // NCS_NCS_HPP_
