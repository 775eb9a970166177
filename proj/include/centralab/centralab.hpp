/*
   Copyright 2026 centralab contributors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <centralab/ad_calculus.hpp>
#include <centralab/certify.hpp>
#include <centralab/decomposition.hpp>
#include <centralab/digest.hpp>
#include <centralab/hulls.hpp>
#include <centralab/matrix_io.hpp>
#include <centralab/matrix_space.hpp>
#include <centralab/rng.hpp>
#include <centralab/shift_lab.hpp>
#include <centralab/types.hpp>
