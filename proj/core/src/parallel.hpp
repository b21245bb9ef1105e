// SPDX-License-Identifier: Apache-2.0
//
// tracechan: trace-driven site-specific MIMO channel simulation
// Copyright (C) 2026 The tracechan authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef TRACECHAN_PARALLEL_HPP
#define TRACECHAN_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace tracechan::detail
{
    // Runs fn(i) for i in [0, n) on up to `workers` threads. Work items are
    // claimed dynamically; callers write results by index so the outcome is
    // independent of scheduling. The first exception (lowest index) is rethrown.
    template <typename Fn>
    void parallel_for(std::size_t n, int workers, Fn &&fn)
    {
        const std::size_t n_threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
        if (n_threads <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                fn(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(n);
        auto body = [&] {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    errors[i] = std::current_exception();
                }
            }
        };

        {
            std::vector<std::jthread> pool;
            pool.reserve(n_threads - 1);
            for (std::size_t t = 1; t < n_threads; ++t)
                pool.emplace_back(body);
            body();
        }

        for (auto &e : errors)
            if (e)
                std::rethrow_exception(e);
    }

} // namespace tracechan::detail

#endif
