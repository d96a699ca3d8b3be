// Copyright 2026 The emitrate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <string_view>

namespace emitrate {

enum class Method { closed_form, quadrature, series, limit };

constexpr std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::quadrature: return "quadrature";
    case Method::series: return "series";
    case Method::limit: return "limit";
  }
  return "unknown";
}

/// Dimensionless decay ratio Gamma / Gamma_free with provenance.
struct RateResult {
  double ratio = 0.0;
  Method method = Method::closed_form;
  double err_estimate = 0.0;
};

}  // namespace emitrate
