// SPDX-License-Identifier: Apache-2.0
//
// mcmimo - multi-cell massive MIMO uplink simulation library
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

#ifndef MCMIMO_MCMIMO_HPP
#define MCMIMO_MCMIMO_HPP

#include "mcmimo/asymptotics.hpp"
#include "mcmimo/channel_stats.hpp"
#include "mcmimo/config.hpp"
#include "mcmimo/detection.hpp"
#include "mcmimo/errors.hpp"
#include "mcmimo/estimation.hpp"
#include "mcmimo/linalg.hpp"
#include "mcmimo/metrics.hpp"
#include "mcmimo/rng.hpp"
#include "mcmimo/sampling.hpp"
#include "mcmimo/scenario.hpp"
#include "mcmimo/stats_dump.hpp"
#include "mcmimo/sweep.hpp"

#endif
