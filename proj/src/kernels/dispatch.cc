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

#include <atomic>
#include <cassert>

#include "dda/kernels.h"

namespace dda::kernels {

namespace {

std::atomic<Isa>& ActiveSlot() {
  static std::atomic<Isa> slot{DetectIsa()};
  return slot;
}

}  // namespace

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

Isa DetectIsa() {
#if defined(DDA_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return Isa::kAvx2;
  }
#endif
  return Isa::kScalar;
}

Isa ActiveIsa() { return ActiveSlot().load(std::memory_order_relaxed); }

Isa SetActiveIsa(Isa isa) {
  if (isa == Isa::kAvx2 && DetectIsa() != Isa::kAvx2) isa = Isa::kScalar;
  ActiveSlot().store(isa, std::memory_order_relaxed);
  return isa;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
#if defined(DDA_HAVE_AVX2)
  if (ActiveIsa() == Isa::kAvx2) return avx2::Dot(a.data(), b.data(), a.size());
#endif
  return scalar::Dot(a.data(), b.data(), a.size());
}

void SgdFactorStep(std::span<double> p, std::span<double> q, double err,
                   double lr, double reg) {
  assert(p.size() == q.size());
#if defined(DDA_HAVE_AVX2)
  if (ActiveIsa() == Isa::kAvx2) {
    avx2::SgdFactorStep(p.data(), q.data(), p.size(), err, lr, reg);
    return;
  }
#endif
  scalar::SgdFactorStep(p.data(), q.data(), p.size(), err, lr, reg);
}

double MinSqDistance3(std::span<const double> x, std::span<const double> y,
                      std::span<const double> z, double qx, double qy,
                      double qz, std::size_t skip) {
  assert(x.size() == y.size() && y.size() == z.size());
#if defined(DDA_HAVE_AVX2)
  if (ActiveIsa() == Isa::kAvx2) {
    return avx2::MinSqDistance3(x.data(), y.data(), z.data(), x.size(), qx,
                                qy, qz, skip);
  }
#endif
  return scalar::MinSqDistance3(x.data(), y.data(), z.data(), x.size(), qx,
                                qy, qz, skip);
}

}  // namespace dda::kernels
