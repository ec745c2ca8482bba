#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "creativity/scoring.hpp"

namespace creativity {

// Child process speaking the line-delimited JSON scorer protocol:
//   request:  {"id": <int>, "info": [..], "prompt": [..], "prefix": [..], "vocab": <int>}
//   response: {"id": <int>, "logprobs": [<natural-log real>; length == vocab]}
// One response per request, in order, one object per line.
class ScorerProcess {
public:
    ScorerProcess(std::vector<std::string> argv, int timeout_ms);
    ~ScorerProcess();

    ScorerProcess(const ScorerProcess&) = delete;
    ScorerProcess& operator=(const ScorerProcess&) = delete;

    // Writes one line, reads one line.  Throws ProtocolError on timeout,
    // broken pipe, or child exit.
    std::string exchange(const std::string& line);

private:
    std::string read_line();

    int child_pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    int timeout_ms_;
    std::string buffer_;
};

// ModelScorer over a ScorerProcess.  Responses are cached by the full
// conditioning tuple (info, prompt, prefix), never evicted, so identical
// requests cost exactly one wire exchange.  Wire access is serialized
// internally; the scorer may be shared across threads.
class ExternalScorer : public ModelScorer {
public:
    ExternalScorer(std::vector<std::string> argv, std::uint32_t vocab_size,
                   int timeout_ms = 10000);

    FiniteDistribution next_token_dist(const Info& info, const Prompt& prompt,
                                       std::span<const Token> prefix) const override;

    std::uint64_t wire_exchanges() const;

private:
    using Key = std::tuple<std::vector<Token>, std::vector<Token>, std::vector<Token>>;

    std::uint32_t vocab_size_;
    mutable std::mutex mutex_;
    mutable std::unique_ptr<ScorerProcess> process_;
    mutable std::map<Key, FiniteDistribution> cache_;
    mutable std::uint64_t next_id_ = 0;
    mutable std::uint64_t wire_exchanges_ = 0;
};

// Splits a command string on whitespace into argv.  Quoting is not
// interpreted; pass pre-split argv to the constructors when arguments
// contain spaces.
std::vector<std::string> split_command(const std::string& command);

ScorerPtr external_scorer(std::vector<std::string> argv, std::uint32_t vocab_size,
                          int timeout_ms = 10000);

}  // namespace creativity
