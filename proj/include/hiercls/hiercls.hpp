#pragma once

#include "hiercls/bench.hpp"
#include "hiercls/classifier.hpp"
#include "hiercls/data.hpp"
#include "hiercls/encoding.hpp"
#include "hiercls/error.hpp"
#include "hiercls/hierarchy.hpp"
#include "hiercls/inference.hpp"
#include "hiercls/loss.hpp"
#include "hiercls/metrics.hpp"
#include "hiercls/model.hpp"
#include "hiercls/train.hpp"
