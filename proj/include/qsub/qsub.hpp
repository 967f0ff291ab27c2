// Copyright 2026 The qsub Authors
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


// Umbrella header for the whole library.

#pragma once

#include "qsub/clifford.hpp"
#include "qsub/dense.hpp"
#include "qsub/errors.hpp"
#include "qsub/exact_root.hpp"
#include "qsub/modring.hpp"
#include "qsub/pauli.hpp"
#include "qsub/phasepoly.hpp"
#include "qsub/random.hpp"
#include "qsub/testing.hpp"
