#include "ims/map_parser.hpp"
#include "ims/errors.hpp"
#include "ims/families.hpp"

#include <cctype>
#include <cstdlib>

namespace ims {

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    AnalyticMap parse() {
        AnalyticMap m = parse_map();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError(pos_, "trailing input after map expression");
        return m;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!consume(c))
            throw ParseError(pos_, std::string("expected '") + c + "'");
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (start == pos_) throw ParseError(pos_, "expected a map name");
        return text_.substr(start, pos_ - start);
    }

    double number() {
        skip_ws();
        const char* begin = text_.c_str() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError(pos_, "expected a number");
        pos_ += static_cast<std::size_t>(end - begin);
        return v;
    }

    AnalyticMap parse_map() {
        std::size_t name_pos = pos_;
        std::string name = ident();
        if (name == "id") return AnalyticMap::identity();
        if (name == "koebe") return AnalyticMap::koebe();
        if (name == "logmap") return AnalyticMap::log_one_minus();
        if (name == "gmap") return AnalyticMap::power_primitive(1.0);
        if (name == "const") {
            expect('(');
            double c = number();
            expect(')');
            return AnalyticMap::constant(c);
        }
        if (name == "affine") {
            expect('(');
            double a = number();
            expect(',');
            double b = number();
            expect(')');
            return AnalyticMap::affine(a, b);
        }
        if (name == "pow1mz") {
            expect('(');
            double s = number();
            expect(')');
            return AnalyticMap::pow_one_minus(s);
        }
        if (name == "cover") {
            // gamma/(1-z)
            expect('(');
            double g = number();
            expect(')');
            return AnalyticMap::product(AnalyticMap::constant(g), AnalyticMap::pow_one_minus(-1.0));
        }
        if (name == "fgamma" || name == "ggamma" || name == "kscaled") {
            expect('(');
            double p = number();
            expect(')');
            try {
                return make_family(family_from_name(name, p));
            } catch (const RangeError& e) {
                throw ParseError(name_pos, e.what());
            }
        }
        if (name == "scale") {
            expect('(');
            double rho = number();
            expect(',');
            AnalyticMap inner = parse_map();
            expect(')');
            if (!(rho > 0.0 && rho <= 1.0))
                throw ParseError(name_pos, "scale factor must lie in (0, 1]");
            return AnalyticMap::scale_arg(rho, inner);
        }
        if (name == "derivpow") {
            expect('(');
            AnalyticMap base = parse_map();
            expect(',');
            double s = number();
            expect(')');
            return AnalyticMap::deriv_power(base, s);
        }
        if (name == "fromphi") {
            expect('(');
            AnalyticMap phi = parse_map();
            expect(')');
            return AnalyticMap::from_pre_schwarzian(phi);
        }
        if (name == "sum" || name == "prod" || name == "quot") {
            expect('(');
            AnalyticMap a = parse_map();
            expect(',');
            AnalyticMap b = parse_map();
            expect(')');
            if (name == "sum") return AnalyticMap::sum(a, b);
            if (name == "prod") return AnalyticMap::product(a, b);
            return AnalyticMap::quotient(a, b);
        }
        throw ParseError(name_pos, "unknown map name: " + name);
    }
};

} // namespace

AnalyticMap parse_map(const std::string& text) { return Parser(text).parse(); }

} // namespace ims
