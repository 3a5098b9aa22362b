#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ccadm/date.hpp"
#include "ccadm/learners/config.hpp"
#include "ccadm/metrics.hpp"

namespace ccadm {

struct AssembledTable;

/// Test-side output of one window -> split -> train -> predict -> measure pass.
struct PipelineResult {
  std::vector<Date> dates;
  std::vector<double> actual;
  std::vector<double> predicted;
  MetricReport report;
  std::size_t train_size = 0;
};

PipelineResult run_pipeline(const AssembledTable& table, const LearnerConfig& config, std::size_t window,
                            double split, std::uint64_t seed, double eps_re);

}  // namespace ccadm
