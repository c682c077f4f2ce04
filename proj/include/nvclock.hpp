// Copyright 2026 The nvclock Authors
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

// Umbrella header.

#include "nvclock/clock_composer.hpp"
#include "nvclock/config.hpp"
#include "nvclock/ensemble.hpp"
#include "nvclock/errors.hpp"
#include "nvclock/fringe_fit.hpp"
#include "nvclock/io.hpp"
#include "nvclock/measurement.hpp"
#include "nvclock/noise.hpp"
#include "nvclock/parallel.hpp"
#include "nvclock/phase_terms.hpp"
#include "nvclock/psn.hpp"
#include "nvclock/pulse_engine.hpp"
#include "nvclock/rng.hpp"
#include "nvclock/scenario.hpp"
#include "nvclock/spectrum.hpp"
#include "nvclock/spin_model.hpp"
