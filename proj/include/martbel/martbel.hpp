/*
 * Copyright 2026 The martbel authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MARTBEL_MARTBEL_HPP
#define MARTBEL_MARTBEL_HPP

#include "martbel/approx.hpp"
#include "martbel/arbitrage.hpp"
#include "martbel/errors.hpp"
#include "martbel/json_io.hpp"
#include "martbel/lp.hpp"
#include "martbel/market.hpp"
#include "martbel/qp.hpp"
#include "martbel/rational.hpp"
#include "martbel/setfunc.hpp"

#endif  // MARTBEL_MARTBEL_HPP
