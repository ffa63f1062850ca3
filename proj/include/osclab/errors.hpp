#pragma once

#include <stdexcept>

namespace osclab {

// Base class for all recoverable failures raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define OSCLAB_DEFINE_ERROR(NAME) \
    struct NAME : Error {         \
        using Error::Error;       \
    }

OSCLAB_DEFINE_ERROR(DomainError);     // parameter outside admissible range
OSCLAB_DEFINE_ERROR(RangeError);      // evaluation outside sampled range
OSCLAB_DEFINE_ERROR(ToleranceError);  // adaptive step control failed
OSCLAB_DEFINE_ERROR(IllConditioned);  // least-squares basis nearly degenerate
OSCLAB_DEFINE_ERROR(SizeError);       // grid size not a power of two or too small
OSCLAB_DEFINE_ERROR(BandError);       // momentum band unresolvable on the grid
OSCLAB_DEFINE_ERROR(SupportError);    // state support leaves the grid
OSCLAB_DEFINE_ERROR(ChannelError);    // time interval straddles t = 0
OSCLAB_DEFINE_ERROR(StepError);       // adaptive step subdivision exhausted
OSCLAB_DEFINE_ERROR(QuadratureError); // adaptive quadrature did not converge
OSCLAB_DEFINE_ERROR(GridMismatch);    // operands live on different grids
OSCLAB_DEFINE_ERROR(BudgetError);     // projected runtime exceeds the configured cap
OSCLAB_DEFINE_ERROR(FloorError);      // signal at numerical floor before the fit window ends
OSCLAB_DEFINE_ERROR(DegenerateFit);   // fit input degenerate: too few or nonpositive points
OSCLAB_DEFINE_ERROR(ConfigError);     // configuration schema violation
OSCLAB_DEFINE_ERROR(ShapeError);      // derived coefficient profile has the wrong tail shape
OSCLAB_DEFINE_ERROR(IoError);         // file I/O failure

#undef OSCLAB_DEFINE_ERROR

}  // namespace osclab
