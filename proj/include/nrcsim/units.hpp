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

#ifndef nrcsim_units_H
#define nrcsim_units_H

#include <cmath>
#include <limits>

namespace nrcsim {

// All quantities are power ratios, so the 10*log10 convention applies
// throughout. Linear values are used internally; dB appears only at the
// CLI/config boundary.

inline double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

inline double linear_to_db(double lin)
{
    if (lin <= 0.0)
        return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(lin);
}

} // namespace nrcsim

#endif
