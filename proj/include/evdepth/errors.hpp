#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evdepth {

// Error classes map onto the CLI exit-code contract:
//   Validation -> 1, Data -> 2, CheckFailure -> 3.
enum class ErrorKind { Validation, Data, CheckFailure };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// --- event stream I/O ---

struct MalformedHeader : Error {
    explicit MalformedHeader(const std::string& why)
        : Error(ErrorKind::Data, "malformed header: " + why) {}
};

struct BadRecord : Error {
    BadRecord(std::size_t index, const std::string& reason)
        : Error(ErrorKind::Data,
                "bad record " + std::to_string(index) + ": " + reason),
          index(index), reason(reason) {}
    std::size_t index;
    std::string reason;
};

struct NonMonotonicTimestamp : Error {
    explicit NonMonotonicTimestamp(std::size_t index)
        : Error(ErrorKind::Data, "timestamp decreases at record " +
                                     std::to_string(index)),
          index(index) {}
    std::size_t index;
};

// --- windowing / representations ---

struct EmptyStream : Error {
    EmptyStream() : Error(ErrorKind::Data, "event stream is empty") {}
};

struct ZeroDurationWindow : Error {
    ZeroDurationWindow()
        : Error(ErrorKind::Validation, "window duration must be > 0") {}
};

struct NonDivisibleShape : Error {
    NonDivisibleShape(std::size_t h, std::size_t w, std::size_t factor)
        : Error(ErrorKind::Validation,
                "shape " + std::to_string(h) + "x" + std::to_string(w) +
                    " not divisible by factor " + std::to_string(factor)) {}
};

// --- uncertainty models ---

struct NonPositiveSigma : Error {
    NonPositiveSigma()
        : Error(ErrorKind::Validation, "sigma must be > 0") {}
};

struct NonPositiveDepth : Error {
    NonPositiveDepth()
        : Error(ErrorKind::Data, "depth must be > 0 for log-normal model") {}
};

struct InvalidParams : Error {
    explicit InvalidParams(const std::string& why)
        : Error(ErrorKind::Validation, "invalid parameters: " + why) {}
};

struct OutOfRange : Error {
    explicit OutOfRange(const std::string& why)
        : Error(ErrorKind::Validation, "out of range: " + why) {}
};

struct Divergence : Error {
    Divergence(std::size_t step, double nll)
        : Error(ErrorKind::Data,
                "fit diverged at step " + std::to_string(step) +
                    " (nll=" + std::to_string(nll) + ")"),
          step(step), nll(nll) {}
    std::size_t step;
    double nll;
};

// --- metrics ---

struct NoValidPixels : Error {
    explicit NoValidPixels(const std::string& subset)
        : Error(ErrorKind::Data, "no valid pixels in subset " + subset),
          subset(subset) {}
    std::string subset;
};

struct ZeroTotalError : Error {
    ZeroTotalError()
        : Error(ErrorKind::Data,
                "total error is zero; sparsification curve undefined") {}
};

// --- synthetic generator ---

struct IndexOutOfRange : Error {
    IndexOutOfRange(std::size_t index, std::size_t count)
        : Error(ErrorKind::Validation,
                "frame index " + std::to_string(index) + " >= " +
                    std::to_string(count)) {}
};

struct NonMonotonicFrames : Error {
    NonMonotonicFrames()
        : Error(ErrorKind::Data,
                "frame timestamps must be strictly increasing") {}
};

struct OutOfSpan : Error {
    explicit OutOfSpan(const std::string& why)
        : Error(ErrorKind::Data, "query outside frame span: " + why) {}
};

}  // namespace evdepth
