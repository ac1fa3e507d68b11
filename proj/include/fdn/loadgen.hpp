#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fdn/model.hpp"
#include "fdn/sim_kernel.hpp"

namespace fdn {

enum class VuState { issuing, waiting, sleeping, done };

struct VirtualUser {
  std::size_t vu_id = 0;
  std::size_t instance = 0;
  std::string function;
  double sleep_s = 0.0;
  double duration_s = 0.0;
  VuState state = VuState::sleeping;
  std::uint64_t issued = 0;
};

/// Closed-loop virtual users. Each VU issues a request, waits for its
/// completion, sleeps, and repeats until its instance's duration elapses.
/// VU k (counted across instances) starts at k milliseconds.
class LoadGenerator {
 public:
  /// Called for every new request; the owner must eventually call complete(vu, ...).
  using Issue = std::function<void(std::size_t vu, const std::string& request_id, const std::string& function)>;

  LoadGenerator(Simulator& sim, const std::vector<TestInstance>& instances, Issue issue);
  LoadGenerator(const LoadGenerator&) = delete;
  LoadGenerator& operator=(const LoadGenerator&) = delete;

  void start();
  /// Completion of the VU's outstanding request. A request that did not
  /// succeed is followed by a pause of at least one second so that a VU facing
  /// an unavailable service does not spin in zero simulated time.
  void complete(std::size_t vu, bool ok);

  std::size_t outstanding() const;
  std::uint64_t issued() const { return issued_; }
  const std::vector<VirtualUser>& vus() const { return vus_; }

  static constexpr double kRetryPause_s = 1.0;

 private:
  void fire(std::size_t vu);

  Simulator& sim_;
  Issue issue_;
  std::vector<VirtualUser> vus_;
  std::vector<std::string> instance_names_;
  std::uint64_t issued_ = 0;
};

}  // namespace fdn
