/*
   Copyright 2026 the hsa authors

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

#include <array>
#include <cstdint>

namespace hsa {

/* Philox 4x32-10 counter-based generator.  A draw is addressed by
   (seed, shard, sample, block), so streams are reproducible independently
   of thread scheduling. */
struct Philox4x32 {
    static std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            uint64_t p0 = 0xD2511F53ull * ctr[0];
            uint64_t p1 = 0xCD9E8D57ull * ctr[2];
            std::array<uint32_t, 4> nxt;
            nxt[0] = static_cast<uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0];
            nxt[1] = static_cast<uint32_t>(p1);
            nxt[2] = static_cast<uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1];
            nxt[3] = static_cast<uint32_t>(p0);
            ctr = nxt;
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        return ctr;
    }
};

/* Uniform doubles for one shard of a counter-based stream.  Each sample
   index starts a fresh block sequence, so per-sample draw counts do not
   perturb later samples. */
class CounterRng {
  public:
    CounterRng(uint64_t seed, uint32_t shard)
        : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)}, shard_(shard) {}

    void begin_sample(uint64_t sample) {
        sample_ = sample;
        block_ = 0;
        have_ = 0;
    }

    /* Uniform in [0, 1) with 53 random bits. */
    double uniform() {
        if (have_ < 2) {
            buf_ = Philox4x32::block({static_cast<uint32_t>(sample_), static_cast<uint32_t>(sample_ >> 32),
                                      block_++, shard_},
                                     key_);
            have_ = 4;
        }
        uint64_t hi = buf_[4 - have_];
        uint64_t lo = buf_[5 - have_];
        have_ -= 2;
        return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
    }

  private:
    std::array<uint32_t, 2> key_;
    uint32_t shard_ = 0;
    uint64_t sample_ = 0;
    uint32_t block_ = 0;
    int have_ = 0;
    std::array<uint32_t, 4> buf_{};
};

}  // namespace hsa
