#ifndef HDF_ERRORS_HPP
#define HDF_ERRORS_HPP

// Exception hierarchy shared by all modules.  Every precondition violation
// throws a named subclass of hdf::Error; callers that want to branch on the
// failure kind catch the subclass.

#include <stdexcept>
#include <string>

namespace hdf {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define HDF_DEFINE_ERROR(NAME)                                              \
    class NAME : public Error {                                             \
    public:                                                                  \
        explicit NAME(const std::string& what) : Error(#NAME ": " + what) {} \
    }

HDF_DEFINE_ERROR(DivisionByZero);
HDF_DEFINE_ERROR(CtxMismatch);
HDF_DEFINE_ERROR(NotPrime);
HDF_DEFINE_ERROR(ZeroPolynomial);
HDF_DEFINE_ERROR(ShapeError);
HDF_DEFINE_ERROR(NoInterpolant);
HDF_DEFINE_ERROR(BadSamples);
HDF_DEFINE_ERROR(NotOnCurve);
HDF_DEFINE_ERROR(TooLarge);
HDF_DEFINE_ERROR(BadTorsionOrder);
HDF_DEFINE_ERROR(BadLambda);
HDF_DEFINE_ERROR(ConstructionError);
HDF_DEFINE_ERROR(SplitAnomaly);
HDF_DEFINE_ERROR(FlowDegenerate);
HDF_DEFINE_ERROR(StructureError);
HDF_DEFINE_ERROR(BadInput);
HDF_DEFINE_ERROR(Inconclusive);
HDF_DEFINE_ERROR(DegenerateDivisionPoly);

#undef HDF_DEFINE_ERROR

} // namespace hdf

#endif
