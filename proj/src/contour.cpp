#include "owdvv/contour.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace owdvv {

void DiskConfig::validate() const
{
    for (size_t j = 0; j < disks.size(); ++j) {
        const Disk& a = disks[j];
        if (sgn(a.radius) <= 0)
            throw MathError("disk " + std::to_string(j + 1) + " has non-positive radius");
        Rational dp = a.phi - a.center;
        if (dp * dp >= a.radius * a.radius)
            throw MathError("marked pole of disk " + std::to_string(j + 1) + " is not inside it");
        if (a.d < 1)
            throw MathError("winding number of disk " + std::to_string(j + 1) + " must be positive");
        for (size_t k = j + 1; k < disks.size(); ++k) {
            const Disk& b = disks[k];
            Rational dc = a.center - b.center, rr = a.radius + b.radius;
            if (dc * dc <= rr * rr)
                throw MathError("disks " + std::to_string(j + 1) + " and " + std::to_string(k + 1) +
                                " are not disjoint");
        }
    }
}

int DiskConfig::locate(const Rational& x) const
{
    for (size_t j = 0; j < disks.size(); ++j) {
        Rational dx = x - disks[j].center;
        Rational d2 = dx * dx, r2 = disks[j].radius * disks[j].radius;
        if (d2 == r2)
            throw MathError("point " + to_string(x) + " lies on contour " + std::to_string(j + 1));
        if (d2 < r2)
            return static_cast<int>(j);
    }
    return -1;
}

Complex eval_complex(const RatFunc<Rational>& f, Complex z)
{
    Complex r = 0;
    const auto& c = f.poly.coeffs();
    for (size_t k = c.size(); k-- > 0;)
        r = r * z + Complex(static_cast<long double>(to_double(c[k])));
    for (auto& [phi, v] : f.parts) {
        Complex di = Complex(1) / (z - Complex(static_cast<long double>(to_double(phi))));
        Complex p = di;
        for (auto& a : v) {
            r += static_cast<long double>(to_double(a)) * p;
            p *= di;
        }
    }
    return r;
}

WindingReport winding_check(const RatFunc<Rational>& zeta, const DiskConfig& cfg, int samples)
{
    WindingReport rep;
    RatFunc<Rational> dz = zeta.derivative();
    const long double two_pi = 2 * std::numbers::pi_v<long double>;
    std::ostringstream msg;
    for (int j = 0; j < cfg.size(); ++j) {
        const Disk& D = cfg.disks[j];
        long double c = to_double(D.center), r = to_double(D.radius);
        Complex acc = 0;
        long double minabs = INFINITY;
        for (int k = 0; k < samples; ++k) {
            long double th = two_pi * k / samples;
            Complex e(std::cos(th), std::sin(th));
            Complex z = c + r * e;
            Complex zv = eval_complex(zeta, z);
            minabs = std::min(minabs, std::abs(zv));
            /* dz = i r e dtheta; (1/2 pi i) * sum f(z) i r e (2 pi / N) */
            acc += eval_complex(dz, z) / zv * r * e;
        }
        long double w = (acc / static_cast<long double>(samples)).real();
        rep.measured.push_back(w);
        rep.declared.push_back(D.d);
        if (!(minabs > 1e-12L)) {
            rep.ok = false;
            msg << "zeta vanishes on contour " << j + 1 << "; ";
        } else if (std::fabs(w - std::round(w)) > 1e-6L || std::lround(w) != D.d) {
            rep.ok = false;
            msg << "contour " << j + 1 << ": measured winding " << static_cast<double>(w) << ", declared "
                << D.d << "; ";
        }
    }
    rep.message = msg.str();
    return rep;
}

}  // namespace owdvv
