#pragma once

#include <complex>

namespace mmgate::osc {

using cplx = std::complex<double>;

// int_0^1 e^{i x s} ds, accurate for all real x.
cplx phi1(double x);

// int_0^1 s^m e^{i x s} ds.
cplx moment(int m, double x);

// int_0^1 ds e^{i x s} int_0^s du e^{i y u}.
cplx nested(double x, double y);

// int_a^b e^{i w t} dt.
cplx segment(double w, double a, double b);

}  // namespace mmgate::osc
