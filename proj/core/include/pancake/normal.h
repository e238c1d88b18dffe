//
// Copyright 2026 The Pancake Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PANCAKE_NORMAL_H_
#define PANCAKE_NORMAL_H_

namespace pancake {

// Standard normal CDF, evaluated through erfc so the lower tail keeps full
// relative precision down to about x = -37.
double StdNormalCdf(double x);

// log Phi(x). Switches to a continued fraction for the Mills ratio below
// x = -30 where Phi itself underflows.
double LogStdNormalCdf(double x);

// Inverse standard normal CDF (Wichura's AS 241, PPND16), relative accuracy
// about 1e-16. Throws Error(kDomain) unless 0 < p < 1.
double StdNormalInvCdf(double p);

}  // namespace pancake

#endif  // PANCAKE_NORMAL_H_
