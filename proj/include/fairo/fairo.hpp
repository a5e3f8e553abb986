// Copyright 2026 The fairo Authors.
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

#include "fairo/activity.hpp"
#include "fairo/common.hpp"
#include "fairo/controller.hpp"
#include "fairo/env_hvac.hpp"
#include "fairo/env_learning.hpp"
#include "fairo/env_water.hpp"
#include "fairo/environment.hpp"
#include "fairo/fairness.hpp"
#include "fairo/harness.hpp"
#include "fairo/metrics.hpp"
#include "fairo/pmv.hpp"
#include "fairo/qnet.hpp"
