#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sltwfs/program.hpp"
#include "sltwfs/term.hpp"

namespace sltwfs {

struct SourceSpan {
    std::size_t line = 1;    // 1-based
    std::size_t column = 1;  // 1-based, in bytes
    std::size_t begin = 0;   // byte offsets, end exclusive
    std::size_t end = 0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(SourceSpan span, std::string message, std::vector<std::string> expected = {});

    const SourceSpan& span() const { return span_; }
    const std::string& message() const { return message_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    SourceSpan span_;
    std::string message_;
    std::vector<std::string> expected_;
};

Program parse_program(std::string_view text);

// Exactly one positive, non-builtin atom, optionally followed by '.'.
Atom parse_query(std::string_view text);

}  // namespace sltwfs
