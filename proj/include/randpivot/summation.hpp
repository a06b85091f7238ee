/*
 * Copyright (C) 2026 The randpivot Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RANDPIVOT_SUMMATION_HPP
#define RANDPIVOT_SUMMATION_HPP

#include <cmath>

namespace randpivot {

/// Neumaier's improved Kahan–Babuška summation.
template <typename T = double>
class CompensatedSum {
 public:
  CompensatedSum& operator+=(T x) noexcept {
    const T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  T value() const noexcept { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

}  // namespace randpivot

#endif  // RANDPIVOT_SUMMATION_HPP
