// Copyright 2026 The qwqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "qwqkd/protocol/common.hpp"

namespace qwqkd::protocol {

// N rounds of the one-way protocol over `walk`. Alice sends |i> (w_A = 0) or
// the walk-basis state U^t (I(x)F)|i> (w_A = 1); Bob measures in Z or in the
// walk basis. Rounds with w_A != w_B are discarded and a random
// config.check_fraction of the rest estimates Q_Z and Q_W. The transcript
// carries c of the walk and the asymptotic rate from the measured error
// rates. Attacks: intercept-resend in Z or in the walk basis, or MITM
// resending a random state from a random basis. Entangling attacks are
// rejected.
ProtocolTranscript protocol2_run(const ProtocolConfig& config, const WalkParams& walk,
                                 const ChannelModel& channel, Rng& rng);

}  // namespace qwqkd::protocol
