#ifndef CMVLAB_ERRORS_HPP
#define CMVLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cmvlab {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define CMVLAB_ERROR(Name)                                                    \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

CMVLAB_ERROR(ZeroArgument);
CMVLAB_ERROR(OddDegree);
CMVLAB_ERROR(ZeroRoot);
CMVLAB_ERROR(ResolutionExceeded);
CMVLAB_ERROR(SupportCollision);
CMVLAB_ERROR(IndexOutOfRange);
CMVLAB_ERROR(DomainViolation);
CMVLAB_ERROR(TailTooLarge);
CMVLAB_ERROR(SingularLeadingBlock);
CMVLAB_ERROR(IncompatibleTruncations);
CMVLAB_ERROR(UnsupportedOperation);
CMVLAB_ERROR(ConfigError);

#undef CMVLAB_ERROR

class QuasidefiniteViolation : public Error {
public:
    QuasidefiniteViolation(int index, const std::string& detail)
        : Error("QuasidefiniteViolation(" + std::to_string(index) + "): " + detail), index_(index)
    {
    }
    int index() const { return index_; }

private:
    int index_;
};

} // namespace cmvlab

#endif
