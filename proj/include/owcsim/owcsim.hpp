// SPDX-License-Identifier: Apache-2.0
//
// owcsim - optical wireless channel simulator for data-centre downlinks
// Copyright (C) 2026 owcsim developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef OWCSIM_OWCSIM_HPP
#define OWCSIM_OWCSIM_HPP

#include "owcsim/config.hpp"
#include "owcsim/geometry.hpp"
#include "owcsim/linkmetrics.hpp"
#include "owcsim/parallel.hpp"
#include "owcsim/raytracer.hpp"
#include "owcsim/receivers.hpp"
#include "owcsim/runner.hpp"
#include "owcsim/scene.hpp"

#endif
