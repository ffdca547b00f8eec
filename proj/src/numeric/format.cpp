#include "heunlab/numeric/format.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace heunlab::numeric {

std::string format_double(double x) {
    if (x == 0)
        x = 0; // drop the sign of negative zero
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string format_complex(std::complex<double> z) {
    std::string im = format_double(z.imag());
    if (im.front() != '-')
        im.insert(im.begin(), '+');
    return format_double(z.real()) + im + "i";
}

double parse_double(std::string_view text) {
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    double x = 0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), x);
    if (text.empty() || r.ec != std::errc() || r.ptr != text.data() + text.size())
        throw std::invalid_argument("malformed number: '" + std::string(text) + "'");
    return x;
}

std::complex<double> parse_complex(std::string_view text) {
    if (text.empty())
        throw std::invalid_argument("empty complex number");
    if (text.back() != 'i')
        return {parse_double(text), 0.0};
    const std::string_view body = text.substr(0, text.size() - 1);
    // Split at the last sign that is not the leading one and not an exponent sign.
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;)
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    const auto imag_of = [&](std::string_view s) {
        if (s.empty() || s == "+")
            return 1.0;
        if (s == "-")
            return -1.0;
        return parse_double(s);
    };
    if (split == std::string_view::npos)
        return {0.0, imag_of(body)};
    return {parse_double(body.substr(0, split)), imag_of(body.substr(split))};
}

std::vector<double> parse_range(std::string_view text) {
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
    if (c2 == std::string_view::npos)
        throw std::invalid_argument("range must be lo:hi:step, got '" + std::string(text) + "'");
    const double lo = parse_double(text.substr(0, c1));
    const double hi = parse_double(text.substr(c1 + 1, c2 - c1 - 1));
    const double step = parse_double(text.substr(c2 + 1));
    if (!(step > 0) || hi < lo)
        throw std::invalid_argument("range needs step > 0 and hi >= lo: '" + std::string(text) + "'");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k)
        out[k] = lo + static_cast<double>(k) * step;
    return out;
}

} // namespace heunlab::numeric
