// Test endpoint speaking the line-delimited JSON scorer protocol.
// Mode (argv[1]) selects the behaviour:
//   uniform       every token equally likely (default)
//   peaked        favors token (sum of prefix) mod vocab, deterministically
//   unnormalized  logprobs sum to 2, not 1
//   bad-id        echoes id + 1
//   garbage       replies with a non-JSON line
//   slow          sleeps 300 ms before every reply
//   die           exits on the first request
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

int main(int argc, char** argv) {
    const std::string mode = argc > 1 ? argv[1] : "uniform";
    std::string line;
    while (std::getline(std::cin, line)) {
        if (line.empty()) continue;
        const nlohmann::json req = nlohmann::json::parse(line, nullptr, false);
        if (req.is_discarded()) return 1;
        if (mode == "die") return 0;
        if (mode == "slow") std::this_thread::sleep_for(std::chrono::milliseconds(300));
        if (mode == "garbage") {
            std::cout << "this is not json" << "\n" << std::flush;
            continue;
        }

        const std::uint64_t id = req.at("id").get<std::uint64_t>();
        const std::uint32_t vocab = req.at("vocab").get<std::uint32_t>();

        std::vector<double> logprobs;
        logprobs.reserve(vocab);
        if (mode == "unnormalized") {
            for (std::uint32_t i = 0; i < vocab; ++i)
                logprobs.push_back(std::log(2.0 / vocab));
        } else if (mode == "peaked") {
            long long sum = 0;
            for (const auto& tok : req.at("prefix")) sum += tok.get<long long>();
            for (const auto& tok : req.at("info")) sum += tok.get<long long>();
            const std::uint32_t target =
                vocab == 0 ? 0 : static_cast<std::uint32_t>(((sum % vocab) + vocab) % vocab);
            const double z = static_cast<double>(vocab) + 2.0;
            for (std::uint32_t i = 0; i < vocab; ++i)
                logprobs.push_back(std::log((i == target ? 3.0 : 1.0) / z));
        } else {
            for (std::uint32_t i = 0; i < vocab; ++i)
                logprobs.push_back(std::log(1.0 / vocab));
        }

        nlohmann::json resp;
        resp["id"] = mode == "bad-id" ? id + 1 : id;
        resp["logprobs"] = logprobs;
        std::cout << resp.dump() << "\n" << std::flush;
    }
    return 0;
}
