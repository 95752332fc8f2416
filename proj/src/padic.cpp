#include "synk/padic.hpp"

// Header-only for now; this TU anchors the library target.
