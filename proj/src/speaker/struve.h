// Copyright 2026 The BiSELD Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BISELD_SPEAKER_STRUVE_H_
#define BISELD_SPEAKER_STRUVE_H_

namespace biseld::speaker {

// First-order Struve function H1(x) for x >= 0. Power series up to 20,
// Y1 plus the asymptotic expansion of H1 - Y1 above.
double StruveH1(double x);

// First-order Bessel function of the first kind.
double BesselJ1(double x);

}  // namespace biseld::speaker

#endif  // BISELD_SPEAKER_STRUVE_H_
