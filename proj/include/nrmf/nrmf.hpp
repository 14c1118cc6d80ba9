#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 The NRMF Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "nrmf/auctions.hpp"
#include "nrmf/error.hpp"
#include "nrmf/experiment.hpp"
#include "nrmf/framework.hpp"
#include "nrmf/generate.hpp"
#include "nrmf/json_io.hpp"
#include "nrmf/network.hpp"
#include "nrmf/prst.hpp"
#include "nrmf/rational.hpp"
#include "nrmf/verify.hpp"
