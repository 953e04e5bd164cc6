#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace bos {

/// Accumulating run log. Collects info/warning lines during parsing and
/// simulation; can be flushed to a PRT-style text report. Tests inspect
/// the collected lines directly.
class RunLog {
public:
    void info(const std::string& line) { lines_.push_back("  " + line); }
    void warn(const std::string& line) { lines_.push_back("WARNING: " + line); ++warnings_; }

    const std::vector<std::string>& lines() const { return lines_; }
    int warnings() const { return warnings_; }

    bool contains(const std::string& needle) const
    {
        for (const auto& l : lines_) {
            if (l.find(needle) != std::string::npos) {
                return true;
            }
        }
        return false;
    }

    void write(const std::string& path) const
    {
        std::ofstream os(path);
        for (const auto& l : lines_) {
            os << l << '\n';
        }
    }

    void echo(std::FILE* stream) const
    {
        for (const auto& l : lines_) {
            std::fputs(l.c_str(), stream);
            std::fputc('\n', stream);
        }
    }

private:
    std::vector<std::string> lines_;
    int warnings_ = 0;
};

} // namespace bos
