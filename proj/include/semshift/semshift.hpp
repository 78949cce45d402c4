// semshift/semshift.hpp — umbrella header
//
// Copyright 2026 the semshift authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "semshift/common.hpp"
#include "semshift/corpus.hpp"
#include "semshift/embedding.hpp"
#include "semshift/huffman.hpp"
#include "semshift/model_io.hpp"
#include "semshift/shift.hpp"
#include "semshift/stats.hpp"
#include "semshift/synth.hpp"
#include "semshift/variability.hpp"
#include "semshift/vocab.hpp"
