#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "aspectra/model.hpp"

namespace aspectra {

/// Environment variable consulted when no model command is given explicitly.
inline constexpr const char* kModelCommandEnv = "ASPECTRA_MODEL_CMD";

/// External model driven over a line protocol on stdin/stdout.
///
/// Each predict() runs `/bin/sh -c <command>` once and exchanges one batch:
///
///     PREDICT <n> <p>
///     <comma-joined column names>
///     <n lines of comma-joined values, 17 significant digits>
///
/// The child answers with exactly n lines holding one decimal prediction
/// each. Anything else (short output, extra lines, non-numeric text, a
/// nonzero exit status) is a SubprocessFailure. Calls on one instance are
/// serialized.
class SubprocessModel final : public Model {
public:
    struct Options {
        std::vector<std::string> schema;  // empty: accept any columns
        bool verify_determinism = false;  // evaluate twice and compare
    };

    explicit SubprocessModel(std::string command) : SubprocessModel(std::move(command), Options{}) {}
    SubprocessModel(std::string command, Options options);

    const std::string& command() const noexcept { return command_; }

    const std::vector<std::string>& schema() const override { return options_.schema; }
    std::string label() const override { return "cmd:" + command_; }

private:
    std::vector<double> predict_unchecked(const NumericTable& table) const override;
    std::vector<double> exchange(const NumericTable& table) const;

    std::string command_;
    Options options_;
    mutable std::mutex mutex_;
};

/// The text written to the child for `table`.
std::string encode_predict_request(const NumericTable& table);

/// Parses the child's reply; throws SubprocessFailure unless it holds exactly
/// `expected` finite decimal lines.
std::vector<double> decode_predict_response(const std::string& text, std::size_t expected);

/// Value of ASPECTRA_MODEL_CMD, if set and nonempty.
std::optional<std::string> model_command_from_env();

}  // namespace aspectra
