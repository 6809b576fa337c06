// SPDX-License-Identifier: Apache-2.0
//
// nrcsim - multi-user massive MIMO downlink performance under channel
// non-reciprocity and imperfect CSI
// Copyright (C) 2026 the nrcsim authors
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

#ifndef nrcsim_nrcsim_H
#define nrcsim_nrcsim_H

#include "analytic.hpp"
#include "config_json.hpp"
#include "csv_io.hpp"
#include "errors.hpp"
#include "montecarlo.hpp"
#include "nrc_stats.hpp"
#include "rng.hpp"
#include "search.hpp"
#include "sweep.hpp"
#include "system_config.hpp"
#include "units.hpp"
#include "version.hpp"

#endif
