#pragma once

#include <stdexcept>
#include <string>

namespace bos {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration detected outside of deck parsing (bad grid
/// dimensions, contact ordering, unsupported phase setup, ...).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Located diagnostic from deck parsing or deck-to-case translation.
class DeckError : public Error {
public:
    DeckError(std::string file, int line, const std::string& what)
        : Error(file + ":" + std::to_string(line) + ": " + what)
        , file_(std::move(file))
        , line_(line)
    {}

    const std::string& file() const { return file_; }
    int line() const { return line_; }

private:
    std::string file_;
    int line_;
};

/// Domain violation inside an elementary AD operation (log of a
/// non-positive value, sqrt of a negative value, ...). Carries the
/// function tag.
class EvaluationError : public Error {
public:
    EvaluationError(std::string tag, const std::string& what)
        : Error(tag + ": " + what)
        , tag_(std::move(tag))
    {}

    const std::string& tag() const { return tag_; }

private:
    std::string tag_;
};

/// Degenerate geometry (zero centroid distance and the like).
class GeometryError : public Error {
public:
    explicit GeometryError(const std::string& what) : Error(what) {}
};

/// Singular pivot block met while factorizing; carries the block row.
class FactorizationError : public Error {
public:
    FactorizationError(int row, const std::string& what)
        : Error(what + " (block row " + std::to_string(row) + ")")
        , row_(row)
    {}

    int row() const { return row_; }

private:
    int row_;
};

/// Singular well-equation matrix; names the well.
class WellEquationError : public Error {
public:
    WellEquationError(std::string well, const std::string& what)
        : Error("well '" + well + "': " + what)
        , well_(std::move(well))
    {}

    const std::string& well() const { return well_; }

private:
    std::string well_;
};

} // namespace bos
