// Copyright 2026 The emitrate Authors
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

#include "emitrate/cavity.hpp"
#include "emitrate/constants.hpp"
#include "emitrate/dynamics.hpp"
#include "emitrate/errors.hpp"
#include "emitrate/freespace.hpp"
#include "emitrate/geometry.hpp"
#include "emitrate/kernel.hpp"
#include "emitrate/mirror.hpp"
#include "emitrate/quadrature.hpp"
#include "emitrate/rate.hpp"
#include "emitrate/rng.hpp"
#include "emitrate/sweep.hpp"
#include "emitrate/validation.hpp"
