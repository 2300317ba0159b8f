#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hiercls {

// Base for every failure the library reports. The CLI maps these to exit
// code 2 (data/validation error).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DuplicateName : public Error {
public:
    explicit DuplicateName(const std::string& name)
        : Error("duplicate node name '" + name + "'"), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class UnknownName : public Error {
public:
    explicit UnknownName(const std::string& name)
        : Error("unknown node name '" + name + "'"), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class SelfLoop : public Error {
public:
    explicit SelfLoop(const std::string& name)
        : Error("self loop on node '" + name + "'"), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class CycleDetected : public Error {
public:
    explicit CycleDetected(std::vector<std::string> cycle);
    // Nodes along one offending cycle, in child->parent order.
    const std::vector<std::string>& cycle() const noexcept { return cycle_; }

private:
    std::vector<std::string> cycle_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class EmptyCandidateSet : public Error {
public:
    EmptyCandidateSet() : Error("no candidate nodes to predict from") {}
};

class LabelNotInHierarchy : public Error {
public:
    LabelNotInHierarchy(std::size_t row, const std::string& label)
        : Error("row " + std::to_string(row) + ": label '" + label +
                "' is not a labeled class of the hierarchy"),
          row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t row, const std::string& what)
        : Error("row " + std::to_string(row) + ": " + what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class EmptyDataset : public Error {
public:
    EmptyDataset() : Error("dataset is empty") {}
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

class ChecksumMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace hiercls
