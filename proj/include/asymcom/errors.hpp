#ifndef ASYMCOM_ERRORS_HPP
#define ASYMCOM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace asymcom {

// Base for all numerical/domain failures. The CLI maps these to exit code 3,
// verification failures to exit code 4.
class MathError : public std::runtime_error {
public:
    MathError(std::string name, const std::string& msg)
        : std::runtime_error(name + ": " + msg), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define ASYMCOM_DEFINE_ERROR(Name)                              \
    struct Name : MathError {                                   \
        explicit Name(const std::string& msg)                   \
            : MathError(#Name, msg) {}                          \
    }

ASYMCOM_DEFINE_ERROR(MultipleRoot);
ASYMCOM_DEFINE_ERROR(NoConvergence);
ASYMCOM_DEFINE_ERROR(DegeneratePole);
ASYMCOM_DEFINE_ERROR(EndpointTooClose);
ASYMCOM_DEFINE_ERROR(NearRoot);
ASYMCOM_DEFINE_ERROR(StepFailure);
ASYMCOM_DEFINE_ERROR(StepUnderflow);
ASYMCOM_DEFINE_ERROR(ZeroDenominator);
ASYMCOM_DEFINE_ERROR(BranchDiscontinuity);
ASYMCOM_DEFINE_ERROR(NewtonDiverged);
ASYMCOM_DEFINE_ERROR(JumpedBranch);
ASYMCOM_DEFINE_ERROR(StepTooLarge);
ASYMCOM_DEFINE_ERROR(DegreeTooLow);
ASYMCOM_DEFINE_ERROR(DecayViolation);
ASYMCOM_DEFINE_ERROR(PathThroughRoot);
ASYMCOM_DEFINE_ERROR(NoBlowup);
ASYMCOM_DEFINE_ERROR(NotInRootRegion);
ASYMCOM_DEFINE_ERROR(UnstableFit);

#undef ASYMCOM_DEFINE_ERROR

// Carries the last x reached so singularity verification can pick it up.
struct BlowupDetected : MathError {
    double last_re, last_im;
    BlowupDetected(const std::string& msg, double re, double im)
        : MathError("BlowupDetected", msg), last_re(re), last_im(im) {}
};

} // namespace asymcom

#endif
