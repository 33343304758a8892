// Copyright 2026 The spinfan Authors.
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

#include "spinfan/circuit.hpp"
#include "spinfan/circuits.hpp"
#include "spinfan/common.hpp"
#include "spinfan/constraints.hpp"
#include "spinfan/coupling.hpp"
#include "spinfan/encoding.hpp"
#include "spinfan/layout.hpp"
#include "spinfan/oracles.hpp"
#include "spinfan/runner.hpp"
#include "spinfan/spin_ops.hpp"
#include "spinfan/statevector.hpp"
