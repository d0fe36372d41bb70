/*
   Copyright 2026 the hsa authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#pragma once

#include <stdexcept>
#include <string>

namespace hsa {

/* Common base so callers can catch any library error in one clause. */
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* Geometry construction. */
struct NotSymmetric : Error {
    using Error::Error;
};
struct Degenerate : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct DegenerateCone : Error {
    using Error::Error;
};
struct DegenerateIntersection : Error {
    using Error::Error;
};

/* Weight classes and norms. */
struct DivergentNorm : Error {
    using Error::Error;
};
struct OutOfDomain : Error {
    using Error::Error;
};

/* Quadrature. */
struct InvalidInterval : Error {
    using Error::Error;
};
struct NoConvergence : Error {
    using Error::Error;
};

/* Operator evaluation and constants. */
struct MissingBound : Error {
    using Error::Error;
};
struct InfeasibleBudget : Error {
    using Error::Error;
};
struct HypothesisViolated : Error {
    using Error::Error;
};

}  // namespace hsa
