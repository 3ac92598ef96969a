// core/include/biasaudit/special_math.hpp

// Copyright 2026  The biasaudit authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef BIASAUDIT_SPECIAL_MATH_HPP_
#define BIASAUDIT_SPECIAL_MATH_HPP_

namespace biasaudit {

// psi(x) for x > 0, via upward recurrence to x >= 6 plus the asymptotic
// series; absolute accuracy ~1e-12 over the range used here.
double digamma(double x);

// psi'(x) for x > 0, same scheme.
double trigamma(double x);

}  // namespace biasaudit

#endif  // BIASAUDIT_SPECIAL_MATH_HPP_
