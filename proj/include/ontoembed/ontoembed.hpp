// Copyright 2026 The ontoembed Authors.
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

#include "ontoembed/checkpoint.hpp"
#include "ontoembed/common.hpp"
#include "ontoembed/config.hpp"
#include "ontoembed/evaluation.hpp"
#include "ontoembed/extensional.hpp"
#include "ontoembed/intensional.hpp"
#include "ontoembed/model.hpp"
#include "ontoembed/ontology.hpp"
#include "ontoembed/sampling.hpp"
#include "ontoembed/synthetic.hpp"
#include "ontoembed/training.hpp"
