#include "ccadm/pipeline.hpp"

#include "ccadm/learners/model.hpp"
#include "ccadm/windowing.hpp"

namespace ccadm {

PipelineResult run_pipeline(const AssembledTable& table, const LearnerConfig& config, std::size_t window_size,
                            double split, std::uint64_t seed, double eps_re) {
  const auto windowed = window(table, window_size);
  auto [train_set, test_set] = chronological_split(windowed, split);
  const auto model = train(config, train_set, seed);
  PipelineResult out;
  out.predicted = model.predict(test_set.X);
  out.report = evaluate(out.predicted, test_set.y, eps_re);
  out.dates = std::move(test_set.example_dates);
  out.actual = std::move(test_set.y);
  out.train_size = train_set.size();
  return out;
}

}  // namespace ccadm
