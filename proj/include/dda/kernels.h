// Copyright 2026 The DDA Authors
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

#ifndef DDA_KERNELS_H_
#define DDA_KERNELS_H_

#include <cstddef>
#include <span>
#include <string_view>

namespace dda::kernels {

// Instruction sets with a kernel implementation. kScalar is the reference;
// every other variant is tested for equivalence against it.
enum class Isa { kScalar, kAvx2 };

std::string_view IsaName(Isa isa);

// Best variant supported by this CPU and compiled into the binary.
Isa DetectIsa();

// The variant the dispatching entry points below currently use.
Isa ActiveIsa();

// Overrides runtime selection (tests, benchmarks, reproducibility across
// machines). Requesting an unsupported ISA falls back to kScalar. Returns
// the ISA actually selected.
Isa SetActiveIsa(Isa isa);

// Sum of a[i] * b[i]. Spans must have equal length.
double Dot(std::span<const double> a, std::span<const double> b);

// One regularized SGD step on a pair of latent factor vectors:
//   p' = p + lr * (err * q - reg * p)
//   q' = q + lr * (err * p - reg * q)
// using the pre-step p in the update of q.
void SgdFactorStep(std::span<double> p, std::span<double> q, double err,
                   double lr, double reg);

// min over i != skip of (x[i]-qx)^2 + (y[i]-qy)^2 + (z[i]-qz)^2, or +inf if
// no candidate remains.
double MinSqDistance3(std::span<const double> x, std::span<const double> y,
                      std::span<const double> z, double qx, double qy,
                      double qz, std::size_t skip);

namespace scalar {
double Dot(const double* a, const double* b, std::size_t n);
void SgdFactorStep(double* p, double* q, std::size_t n, double err,
                   double lr, double reg);
double MinSqDistance3(const double* x, const double* y, const double* z,
                      std::size_t n, double qx, double qy, double qz,
                      std::size_t skip);
}  // namespace scalar

#if defined(DDA_HAVE_AVX2)
namespace avx2 {
double Dot(const double* a, const double* b, std::size_t n);
void SgdFactorStep(double* p, double* q, std::size_t n, double err,
                   double lr, double reg);
double MinSqDistance3(const double* x, const double* y, const double* z,
                      std::size_t n, double qx, double qy, double qz,
                      std::size_t skip);
}  // namespace avx2
#endif

}  // namespace dda::kernels

#endif  // DDA_KERNELS_H_
