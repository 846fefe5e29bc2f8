// Copyright 2026 The ldsc Authors. All Rights Reserved.
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

#include "ldsc/config.hpp"
#include "ldsc/corpus/dataset.hpp"
#include "ldsc/corpus/dialogue_act.hpp"
#include "ldsc/corpus/lexicalize.hpp"
#include "ldsc/corpus/synth.hpp"
#include "ldsc/corpus/vocabulary.hpp"
#include "ldsc/diagnostics.hpp"
#include "ldsc/encoder.hpp"
#include "ldsc/errors.hpp"
#include "ldsc/generation.hpp"
#include "ldsc/lstm.hpp"
#include "ldsc/metrics.hpp"
#include "ldsc/model.hpp"
#include "ldsc/numerics/adam.hpp"
#include "ldsc/numerics/checkpoint.hpp"
#include "ldsc/numerics/dropout.hpp"
#include "ldsc/numerics/gradcheck.hpp"
#include "ldsc/numerics/matrix.hpp"
#include "ldsc/numerics/parameter.hpp"
#include "ldsc/numerics/rng.hpp"
#include "ldsc/pipeline.hpp"
#include "ldsc/pretrain.hpp"
#include "ldsc/scdecoder.hpp"
#include "ldsc/trainer.hpp"
