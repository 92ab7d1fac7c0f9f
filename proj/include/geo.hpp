// Copyright 2026 The geo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include "geo/error.hpp"
#include "geo/tensor.hpp"
#include "geo/quadrature.hpp"
#include "geo/divergence.hpp"
#include "geo/quantum.hpp"
#include "geo/geometry.hpp"
#include "geo/montecarlo.hpp"
#include "geo/estimation.hpp"
#include "geo/roundtrip.hpp"
#include "geo/any_divergence.hpp"
