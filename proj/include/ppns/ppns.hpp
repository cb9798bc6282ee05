//
// Copyright 2026 The PPNS Authors
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
//

// Umbrella header for the whole library.

#ifndef PPNS_PPNS_HPP_
#define PPNS_PPNS_HPP_

#include "ppns/attack.hpp"
#include "ppns/config.hpp"
#include "ppns/dataset.hpp"
#include "ppns/eval.hpp"
#include "ppns/pipeline.hpp"
#include "ppns/prediction.hpp"
#include "ppns/privacy.hpp"
#include "ppns/quadrature.hpp"
#include "ppns/sampling.hpp"
#include "ppns/selection.hpp"
#include "ppns/similarity.hpp"
#include "ppns/types.hpp"
#include "ppns/wallenius.hpp"

#endif  // PPNS_PPNS_HPP_
