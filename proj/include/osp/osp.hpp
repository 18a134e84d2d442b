// Copyright 2026 The OSP Authors
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

#ifndef OSP_OSP_HPP_
#define OSP_OSP_HPP_

#include "osp/error.hpp"
#include "osp/io.hpp"
#include "osp/metric.hpp"
#include "osp/pipeline.hpp"
#include "osp/pose_model.hpp"
#include "osp/rank_eval.hpp"
#include "osp/sites.hpp"
#include "osp/synth.hpp"

#endif  // OSP_OSP_HPP_
