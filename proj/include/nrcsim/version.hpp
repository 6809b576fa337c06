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

#ifndef nrcsim_version_H
#define nrcsim_version_H

namespace nrcsim {

inline constexpr const char *version = "0.1.0";

// Bumped when the closed-form evaluator or the Monte Carlo estimator
// changes in a result-affecting way; recorded in run manifests.
inline constexpr const char *analytic_engine_version = "analytic-1";
inline constexpr const char *mc_engine_version = "mc-1";

} // namespace nrcsim

#endif
