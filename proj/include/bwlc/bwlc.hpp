#pragma once

#include "bwlc/baselines.hpp"
#include "bwlc/core.hpp"
#include "bwlc/dual_ogd.hpp"
#include "bwlc/environments.hpp"
#include "bwlc/exp3six.hpp"
#include "bwlc/experiment.hpp"
#include "bwlc/harness.hpp"
#include "bwlc/igw.hpp"
#include "bwlc/instance_json.hpp"
#include "bwlc/jsonl.hpp"
#include "bwlc/lp.hpp"
#include "bwlc/parallel.hpp"
#include "bwlc/regression.hpp"
#include "bwlc/rng.hpp"
#include "bwlc/sweep.hpp"
#include "bwlc/verify.hpp"
