// Copyright 2026 The testcover Authors
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

#include "testcover/bench.hpp"
#include "testcover/bounds_exact.hpp"
#include "testcover/core.hpp"
#include "testcover/errors.hpp"
#include "testcover/fpt.hpp"
#include "testcover/greedy.hpp"
#include "testcover/io.hpp"
#include "testcover/item_set.hpp"
#include "testcover/reductions.hpp"
