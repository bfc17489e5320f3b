/*******************************************************************************
 * Copyright 2026 The sixbar Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *******************************************************************************/

#pragma once

#include "sixbar/geometry.hpp"
#include "sixbar/design_vars.hpp"
#include "sixbar/kinematics.hpp"
#include "sixbar/synthesis.hpp"
#include "sixbar/criteria.hpp"
#include "sixbar/sobol.hpp"
#include "sixbar/search.hpp"
#include "sixbar/io/config.hpp"
#include "sixbar/io/csv.hpp"
#include "sixbar/io/svg.hpp"
#include "sixbar/io/fixtures.hpp"
#include "sixbar/io/reproduce.hpp"
