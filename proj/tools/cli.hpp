// Copyright 2026 The qbd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <iosfwd>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace qbd::cli {

enum ExitCode : int {
    kOk = 0,
    kDomainError = 1,
    kUsageError = 2,
    kNumericalError = 3,
    kIoError = 4,
};

/// Runs one invocation. `args` excludes the program name. CSV goes to `out`
/// unless --out names a file; the human-readable summary goes to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Thrown for malformed flag values that CLI11 cannot catch on its own.
class UsageError : public std::exception {
   public:
    explicit UsageError(std::string what) : what_(std::move(what)) {
    }
    const char *what() const noexcept override {
        return what_.c_str();
    }

   private:
    std::string what_;
};

/// Grid specs: "a,b,c" (explicit list), "a..b" (default_count points) or
/// "a..b:n". Ranges are linear unless `log` is set.
std::vector<double> parse_grid(const std::string &spec, std::size_t default_count, bool log = false);

/// Log-spaced grid that contains 1 exactly whenever 1 lies inside [lo, hi].
std::vector<double> log_grid_with_unit(double lo, double hi, std::size_t count);

/// %.17g, with "nan" / "inf" / "-inf" spelled out.
std::string format_double(double x);

/// Evaluates fn(i) for i in [0, count) on up to `threads` workers and returns
/// the results in index order. The first failing index (lowest i) rethrows.
template <typename Fn>
std::vector<std::string> ordered_map(std::size_t count, unsigned threads, Fn fn) {
    std::vector<std::string> rows(count);
    std::vector<std::exception_ptr> errors(count);
    unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    auto body = [&](unsigned w) {
        for (std::size_t i = w; i < count; i += workers) {
            try {
                rows[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; w++) {
            pool.emplace_back(body, w);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return rows;
}

}  // namespace qbd::cli
