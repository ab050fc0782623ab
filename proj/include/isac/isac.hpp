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

#ifndef ISAC_ISAC_HPP
#define ISAC_ISAC_HPP

#include "isac/error.hpp"
#include "isac/random.hpp"
#include "isac/quadrature.hpp"
#include "isac/channel_geometry.hpp"
#include "isac/kinematics.hpp"
#include "isac/closed_form.hpp"
#include "isac/mc_oracle.hpp"
#include "isac/time_allocation.hpp"
#include "isac/protocol_sim.hpp"
#include "isac/config.hpp"
#include "isac/output.hpp"

#endif
