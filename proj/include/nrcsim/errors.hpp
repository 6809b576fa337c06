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

#ifndef nrcsim_errors_H
#define nrcsim_errors_H

#include <stdexcept>
#include <string>

namespace nrcsim {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration validation failures.
struct DimensionError : Error {
    using Error::Error;
};
struct PilotError : Error {
    using Error::Error;
};
struct RangeError : Error {
    using Error::Error;
};
struct StatsError : Error {
    using Error::Error;
};

// Monte Carlo engine failures.
struct SingularChannel : Error {
    using Error::Error;
};
struct InsufficientRealizations : Error {
    using Error::Error;
};

// Search / inversion failures.
struct InfeasibleTarget : Error {
    using Error::Error;
};

// Front-end failures.
struct ParseError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

} // namespace nrcsim

#endif
