#include "creativity/external_scorer.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "creativity/errors.hpp"

namespace creativity {

ScorerProcess::ScorerProcess(std::vector<std::string> argv, int timeout_ms)
    : timeout_ms_(timeout_ms) {
    if (argv.empty()) throw ProtocolError("scorer process: empty command");
    int to_pipe[2], from_pipe[2];
    if (pipe(to_pipe) != 0 || pipe(from_pipe) != 0)
        throw ProtocolError("scorer process: pipe() failed");
    pid_t pid = fork();
    if (pid < 0) throw ProtocolError("scorer process: fork() failed");
    if (pid == 0) {
        dup2(to_pipe[0], STDIN_FILENO);
        dup2(from_pipe[1], STDOUT_FILENO);
        close(to_pipe[0]);
        close(to_pipe[1]);
        close(from_pipe[0]);
        close(from_pipe[1]);
        std::vector<char*> cargv;
        cargv.reserve(argv.size() + 1);
        for (std::string& arg : argv) cargv.push_back(arg.data());
        cargv.push_back(nullptr);
        execvp(cargv[0], cargv.data());
        _exit(127);
    }
    child_pid_ = pid;
    to_child_ = to_pipe[1];
    from_child_ = from_pipe[0];
    close(to_pipe[0]);
    close(from_pipe[1]);
}

ScorerProcess::~ScorerProcess() {
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    if (child_pid_ > 0) {
        int status = 0;
        if (waitpid(child_pid_, &status, WNOHANG) == 0) {
            kill(child_pid_, SIGKILL);
            waitpid(child_pid_, &status, 0);
        }
    }
}

std::string ScorerProcess::read_line() {
    for (;;) {
        std::size_t nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        pollfd pfd{from_child_, POLLIN, 0};
        int ready = poll(&pfd, 1, timeout_ms_);
        if (ready == 0) throw ProtocolError("scorer process: response timeout");
        if (ready < 0) throw ProtocolError("scorer process: poll() failed");
        char chunk[4096];
        ssize_t got = read(from_child_, chunk, sizeof chunk);
        if (got <= 0)
            throw ProtocolError("scorer process: child closed its output", buffer_);
        buffer_.append(chunk, static_cast<std::size_t>(got));
    }
}

std::string ScorerProcess::exchange(const std::string& line) {
    std::string out = line;
    out.push_back('\n');
    std::size_t written = 0;
    while (written < out.size()) {
        ssize_t n = write(to_child_, out.data() + written, out.size() - written);
        if (n <= 0) {
            if (errno == EINTR) continue;
            throw ProtocolError("scorer process: write to child failed", line);
        }
        written += static_cast<std::size_t>(n);
    }
    return read_line();
}

ExternalScorer::ExternalScorer(std::vector<std::string> argv, std::uint32_t vocab_size,
                               int timeout_ms)
    : vocab_size_(vocab_size),
      process_(std::make_unique<ScorerProcess>(std::move(argv), timeout_ms)) {
    if (vocab_size_ == 0) throw DomainError("external scorer: vocab size must be positive");
}

std::uint64_t ExternalScorer::wire_exchanges() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return wire_exchanges_;
}

FiniteDistribution ExternalScorer::next_token_dist(const Info& info, const Prompt& prompt,
                                                   std::span<const Token> prefix) const {
    Key key{info.tokens, prompt.tokens, {prefix.begin(), prefix.end()}};
    std::lock_guard<std::mutex> lock(mutex_);
    auto hit = cache_.find(key);
    if (hit != cache_.end()) return hit->second;

    nlohmann::json request{{"id", next_id_},
                           {"info", info.tokens},
                           {"prompt", prompt.tokens},
                           {"prefix", std::get<2>(key)},
                           {"vocab", vocab_size_}};
    std::string reply = process_->exchange(request.dump());
    ++wire_exchanges_;

    nlohmann::json response = nlohmann::json::parse(reply, nullptr, false);
    if (response.is_discarded())
        throw ProtocolError("external scorer: response is not valid JSON", reply);
    if (!response.contains("id") || !response["id"].is_number_integer() ||
        response["id"].get<std::uint64_t>() != next_id_)
        throw ProtocolError("external scorer: response id does not match the request", reply);
    if (!response.contains("logprobs") || !response["logprobs"].is_array() ||
        response["logprobs"].size() != vocab_size_)
        throw ProtocolError("external scorer: logprobs missing or wrong length", reply);
    ++next_id_;

    std::vector<double> probs(vocab_size_);
    double sum = 0.0;
    for (std::size_t i = 0; i < vocab_size_; ++i) {
        const auto& entry = response["logprobs"][i];
        if (!entry.is_number())
            throw ProtocolError("external scorer: non-numeric logprob", reply);
        probs[i] = std::exp(entry.get<double>());
        sum += probs[i];
    }
    if (!std::isfinite(sum) || std::abs(sum - 1.0) > 1e-6)
        throw ProtocolError("external scorer: exp(logprobs) sums to " + std::to_string(sum) +
                                ", outside 1 +/- 1e-6",
                            reply);
    for (double& p : probs) p /= sum;
    FiniteDistribution dist{std::move(probs)};
    cache_.emplace(std::move(key), dist);
    return dist;
}

std::vector<std::string> split_command(const std::string& command) {
    std::istringstream in(command);
    std::vector<std::string> argv;
    std::string word;
    while (in >> word) argv.push_back(word);
    if (argv.empty()) throw DomainError("split_command: empty command");
    return argv;
}

ScorerPtr external_scorer(std::vector<std::string> argv, std::uint32_t vocab_size,
                          int timeout_ms) {
    return std::make_shared<ExternalScorer>(std::move(argv), vocab_size, timeout_ms);
}

}  // namespace creativity
