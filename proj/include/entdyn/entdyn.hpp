// Copyright 2026 The entdyn authors.
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

#ifndef ENTDYN_ENTDYN_HPP
#define ENTDYN_ENTDYN_HPP

#include "entdyn/analysis.hpp"
#include "entdyn/errors.hpp"
#include "entdyn/fock.hpp"
#include "entdyn/lindblad.hpp"
#include "entdyn/linalg.hpp"
#include "entdyn/negativity.hpp"
#include "entdyn/operators.hpp"
#include "entdyn/states.hpp"

#endif  // ENTDYN_ENTDYN_HPP
