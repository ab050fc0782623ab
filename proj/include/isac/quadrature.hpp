// SPDX-License-Identifier: Apache-2.0
//
// isac-polyblock: IRS-assisted sensing and communication simulator
// Copyright (C) 2026 The isac-polyblock authors
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

#ifndef ISAC_QUADRATURE_HPP
#define ISAC_QUADRATURE_HPP

#include "isac/error.hpp"

#include <cmath>
#include <cstddef>

namespace isac
{
    namespace detail
    {
        template <typename F>
        double simpson_recurse(const F &f, double a, double b, double fa, double fm, double fb, double whole,
                               double tol, int depth)
        {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m);
            const double rm = 0.5 * (m + b);
            const double flm = f(lm);
            const double frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
                return left + right + delta / 15.0;
            return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
                   simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
        }
    }

    // Adaptive Simpson over [a, b] split into `panels` equal panels, each refined
    // until its share of abs_tol is met. Oscillatory integrands need enough panels
    // to resolve every lobe up front.
    template <typename F>
    double adaptive_simpson(const F &f, double a, double b, double abs_tol = 1e-8, std::size_t panels = 1,
                            int max_depth = 40)
    {
        detail::require(panels >= 1, ErrorKind::invalid_input, "adaptive_simpson: panels must be >= 1");
        detail::require(abs_tol > 0.0, ErrorKind::invalid_input, "adaptive_simpson: tolerance must be > 0");
        const double h = (b - a) / static_cast<double>(panels);
        const double panel_tol = abs_tol / static_cast<double>(panels);
        double total = 0.0;
        double fa = f(a);
        for (std::size_t p = 0; p < panels; ++p)
        {
            const double lo = a + h * static_cast<double>(p);
            const double hi = (p + 1 == panels) ? b : a + h * static_cast<double>(p + 1);
            const double mid = 0.5 * (lo + hi);
            const double fm = f(mid);
            const double fb = f(hi);
            const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
            total += detail::simpson_recurse(f, lo, hi, fa, fm, fb, whole, panel_tol, max_depth);
            fa = fb;
        }
        return total;
    }
}

#endif
