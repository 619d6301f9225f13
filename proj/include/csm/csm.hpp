// Copyright 2026 The CSM Toolbox Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "csm/common.hpp"
#include "csm/dynamics.hpp"
#include "csm/lgt_models.hpp"
#include "csm/operators.hpp"
#include "csm/optimize.hpp"
#include "csm/oracle.hpp"
#include "csm/parallel.hpp"
#include "csm/projection.hpp"
#include "csm/simulator.hpp"
#include "csm/thermo.hpp"
#include "csm/variational.hpp"
