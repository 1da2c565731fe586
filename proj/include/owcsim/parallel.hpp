// SPDX-License-Identifier: Apache-2.0
//
// owcsim - optical wireless channel simulator for data-centre downlinks
// Copyright (C) 2026 owcsim developers
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

#ifndef OWCSIM_PARALLEL_HPP
#define OWCSIM_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace owcsim
{

inline unsigned resolve_threads(unsigned requested) noexcept
{
    if (requested > 0)
        return requested;
    unsigned const hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Splits [0, n) into fixed-size chunks and evaluates `fn(begin, end)` for
/// each, on up to `threads` workers. Results come back indexed by chunk, so
/// any reduction the caller performs over them runs in the same order
/// whatever the worker count.
template<class Fn>
auto parallel_reduce_chunks(std::size_t n, std::size_t chunk, unsigned threads, Fn &&fn)
    -> std::vector<std::invoke_result_t<Fn &, std::size_t, std::size_t>>
{
    using Result = std::invoke_result_t<Fn &, std::size_t, std::size_t>;
    chunk = std::max<std::size_t>(chunk, 1);
    std::size_t const nchunks = (n + chunk - 1) / chunk;
    std::vector<Result> results(nchunks);
    if (nchunks == 0)
        return results;

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;)
        {
            std::size_t const c = next.fetch_add(1);
            if (c >= nchunks)
                return;
            try
            {
                std::size_t const begin = c * chunk;
                results[c] = fn(begin, std::min(n, begin + chunk));
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        }
    };

    unsigned const nworkers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), nchunks));
    if (nworkers <= 1)
    {
        worker();
    }
    else
    {
        std::vector<std::jthread> pool;
        pool.reserve(nworkers - 1);
        for (unsigned t = 1; t < nworkers; ++t)
            pool.emplace_back(worker);
        worker();
    }
    if (error)
        std::rethrow_exception(error);
    return results;
}

} // namespace owcsim

#endif
