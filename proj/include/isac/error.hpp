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

#ifndef ISAC_ERROR_HPP
#define ISAC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace isac
{
    enum class ErrorKind
    {
        invalid_input,
        state_out_of_domain,
        infeasible_sensing,
        degenerate_filter,
        degenerate_variance,
        degenerate_projection,
        infeasible_problem,
        resource_limit,
        domain_error,
        config_error
    };

    inline const char *to_string(ErrorKind kind)
    {
        switch (kind)
        {
        case ErrorKind::invalid_input:
            return "invalid input";
        case ErrorKind::state_out_of_domain:
            return "state out of domain";
        case ErrorKind::infeasible_sensing:
            return "infeasible sensing";
        case ErrorKind::degenerate_filter:
            return "degenerate filter";
        case ErrorKind::degenerate_variance:
            return "degenerate variance";
        case ErrorKind::degenerate_projection:
            return "degenerate projection";
        case ErrorKind::infeasible_problem:
            return "infeasible problem";
        case ErrorKind::resource_limit:
            return "resource limit";
        case ErrorKind::domain_error:
            return "domain error";
        case ErrorKind::config_error:
            return "config error";
        }
        return "error";
    }

    // All library failures are reported through this type; kind() lets callers branch.
    class Error : public std::runtime_error
    {
    public:
        Error(ErrorKind kind, const std::string &what)
            : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

        ErrorKind kind() const noexcept { return kind_; }

    private:
        ErrorKind kind_;
    };

    // Raised when the sensing constraints cannot all be met; carries the largest
    // SNR threshold that would still be feasible.
    class InfeasibleError : public Error
    {
    public:
        InfeasibleError(double gamma_th, double max_gamma)
            : Error(ErrorKind::infeasible_problem,
                    "sensing threshold " + std::to_string(gamma_th) +
                        " exceeds the largest feasible echo SNR " + std::to_string(max_gamma)),
              gamma_th_(gamma_th), max_gamma_(max_gamma) {}

        double gamma_th() const noexcept { return gamma_th_; }
        double max_gamma() const noexcept { return max_gamma_; }

    private:
        double gamma_th_;
        double max_gamma_;
    };

    namespace detail
    {
        inline void require(bool cond, ErrorKind kind, const char *what)
        {
            if (!cond)
                throw Error(kind, what);
        }
    }
}

#endif
