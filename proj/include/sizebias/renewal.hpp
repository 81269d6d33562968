// Copyright 2026 The sizebias Authors.
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

#ifndef SIZEBIAS_RENEWAL_HPP
#define SIZEBIAS_RENEWAL_HPP

#include <cstddef>
#include <vector>

#include "sizebias/distribution.hpp"
#include "sizebias/rng.hpp"
#include "sizebias/stats.hpp"

namespace sizebias {

/// Stationary renewal process built from one interarrival law: the origin
/// falls inside an interval of length X0* (the size-biased interarrival),
/// uniformly positioned, with i.i.d. interarrivals on both sides. Arrivals
/// sit at U X0*, U X0* + X1, ... and  -(1-U) X0*, ...
class StationaryRenewal {
public:
    explicit StationaryRenewal(Distribution interarrival);

    /// Forward waiting time from clock time t >= 0, computed from the path
    /// representation (no event stepping).
    double waiting_time(double t, RngStream& rng) const;

    const Distribution& interarrival() const { return interarrival_; }
    const Distribution& biased() const { return biased_; }

private:
    Distribution interarrival_;
    Distribution biased_;
};

/// n_reps independent draws of the waiting time W_t.
std::vector<double> simulate_waiting(const Distribution& interarrival, double t,
                                     std::size_t n_reps, RngStream& rng);

struct DartResult {
    std::vector<double> lengths;
    double rejection_rate = 0.0;
};

/// Throw darts T ~ U(0, l) at a renewal path on [0, l]; return the lengths
/// of the intervals covering the darts. Darts landing in the final interval
/// straddling l are rejected and redrawn.
DartResult dart_interval(const Distribution& interarrival, double horizon_l,
                         std::size_t n_darts, RngStream& rng);

struct SplitReport {
    KsReport margin_forward;    // U X0*        vs Exp(1)
    KsReport margin_backward;   // (1-U) X0*    vs Exp(1)
    double independence_stat = 0.0;
    bool margins_pass = false;
};

/// The exponential coincidence: with X0* ~ Gamma(1,2), the split pair
/// (U X0*, (1-U) X0*) has independent Exp(1) margins. Setting
/// negative_control draws X0* ~ Exp(1) instead, which breaks the margins.
SplitReport exponential_split_test(std::size_t n_reps, RngStream& rng,
                                   bool negative_control = false);

}  // namespace sizebias

#endif  // SIZEBIAS_RENEWAL_HPP
