#include "evcorr/time.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace evcorr {

namespace {

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    bool done() const { return pos_ >= text_.size(); }
    char peek() const { return done() ? '\0' : text_[pos_]; }
    void skip() { ++pos_; }

    int number(int max_digits) {
        std::size_t start = pos_;
        while (!done() && std::isdigit(static_cast<unsigned char>(peek())) &&
               pos_ - start < static_cast<std::size_t>(max_digits))
            ++pos_;
        if (start == pos_) fail();
        int value = 0;
        std::from_chars(text_.data() + start, text_.data() + pos_, value);
        return value;
    }

    void expect(char c) {
        if (peek() != c) fail();
        ++pos_;
    }

    [[noreturn]] void fail() const {
        throw std::invalid_argument("unparseable timestamp '" + std::string(text_) + "'");
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
    text = trim(text);
    Cursor in(text);
    int year = in.number(4);
    in.expect('-');
    int month = in.number(2);
    in.expect('-');
    int day = in.number(2);
    if (in.peek() != ' ' && in.peek() != 'T') in.fail();
    in.skip();
    int hour = in.number(2);
    in.expect(':');
    int minute = in.number(2);
    in.expect(':');
    int second = in.number(2);
    if (in.peek() == '.' || in.peek() == ',') {
        in.skip();
        in.number(9);
    }

    std::chrono::minutes offset{0};
    if (in.peek() == 'Z') {
        in.skip();
    } else if (in.peek() == '+' || in.peek() == '-') {
        int sign = in.peek() == '-' ? -1 : 1;
        in.skip();
        int oh = in.number(2);
        if (in.peek() == ':') in.skip();
        int om = in.done() ? 0 : in.number(2);
        offset = std::chrono::minutes(sign * (oh * 60 + om));
    }
    if (!in.done()) in.fail();

    std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                                    std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok() || hour > 23 || minute > 59 || second > 60) in.fail();

    auto ts = std::chrono::sys_days{ymd} + std::chrono::hours{hour} + std::chrono::minutes{minute} +
              std::chrono::seconds{second};
    return std::chrono::time_point_cast<std::chrono::seconds>(ts - offset);
}

std::string format_timestamp(Timestamp ts) {
    auto day = std::chrono::floor<std::chrono::days>(ts);
    std::chrono::year_month_day ymd{day};
    std::chrono::hh_mm_ss hms{ts - day};
    char buf[96];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02ld:%02ld:%02ld", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                  static_cast<long>(hms.seconds().count()));
    return buf;
}

}  // namespace evcorr
