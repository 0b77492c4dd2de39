#pragma once

#include <stdexcept>
#include <string>

namespace sublaw {

struct EnumerationCapExceeded : std::runtime_error {
    explicit EnumerationCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidWindow : std::invalid_argument {
    explicit InvalidWindow(const std::string& what) : std::invalid_argument(what) {}
};

struct NegativeTruncationLevel : std::invalid_argument {
    explicit NegativeTruncationLevel(const std::string& what) : std::invalid_argument(what) {}
};

struct NonMeasurableEvent : std::invalid_argument {
    explicit NonMeasurableEvent(const std::string& what) : std::invalid_argument(what) {}
};

struct UnboundedSupport : std::invalid_argument {
    explicit UnboundedSupport(const std::string& what) : std::invalid_argument(what) {}
};

struct WindowMismatch : std::invalid_argument {
    explicit WindowMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct SchemeUnavailable : std::invalid_argument {
    explicit SchemeUnavailable(const std::string& what) : std::invalid_argument(what) {}
};

struct OutOfHorizon : std::out_of_range {
    explicit OutOfHorizon(const std::string& what) : std::out_of_range(what) {}
};

struct NotFoundOnPrefix : std::runtime_error {
    explicit NotFoundOnPrefix(const std::string& what) : std::runtime_error(what) {}
};

struct CenteringUnavailable : std::runtime_error {
    explicit CenteringUnavailable(const std::string& what) : std::runtime_error(what) {}
};

struct MissingCertificate : std::invalid_argument {
    explicit MissingCertificate(const std::string& what) : std::invalid_argument(what) {}
};

struct HypothesisUnmet : std::runtime_error {
    explicit HypothesisUnmet(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sublaw
