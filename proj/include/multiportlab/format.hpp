#pragma once

// Deterministic text serialization helpers shared by the library and the CLI:
// doubles at full round-trip precision (%.17g), a small order-stable JSON
// writer, and CSV row assembly. Outputs are byte-identical across runs for
// identical inputs; no locale, no timestamps.

#include <cstdio>
#include <cstdint>
#include <string>
#include <string_view>
#include <stdexcept>
#include <vector>

namespace mplab {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

inline std::string json_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    return out;
}

// Append-only JSON writer. Objects and container-valued arrays are emitted one
// entry per line with two-space indentation; arrays holding only scalars are
// emitted inline. Key order is exactly the call order, so documents built from
// the same data are byte-identical.
class JsonWriter {
public:
    JsonWriter& begin_object() {
        prefix();
        out_ += '{';
        stack_.push_back(Frame{Kind::object, false, false});
        return *this;
    }

    JsonWriter& end_object() {
        require(Kind::object, "end_object");
        bool had = stack_.back().has_items;
        stack_.pop_back();
        if (had) {
            out_ += '\n';
            indent();
        }
        out_ += '}';
        return *this;
    }

    // inline_scalars: true for arrays of numbers/strings/bools only
    JsonWriter& begin_array(bool inline_scalars = false) {
        prefix();
        out_ += '[';
        stack_.push_back(Frame{Kind::array, false, inline_scalars});
        return *this;
    }

    JsonWriter& end_array() {
        require(Kind::array, "end_array");
        bool had = stack_.back().has_items;
        bool inl = stack_.back().inline_items;
        stack_.pop_back();
        if (had && !inl) {
            out_ += '\n';
            indent();
        }
        out_ += ']';
        return *this;
    }

    JsonWriter& key(std::string_view k) {
        require(Kind::object, "key");
        if (pending_key_) throw std::logic_error("JsonWriter: key already pending");
        comma_and_newline();
        out_ += '"';
        out_ += json_escape(k);
        out_ += "\": ";
        pending_key_ = true;
        return *this;
    }

    JsonWriter& value(double v) { return scalar(fmt17(v)); }
    JsonWriter& value(int v) { return scalar(std::to_string(v)); }
    JsonWriter& value(long v) { return scalar(std::to_string(v)); }
    JsonWriter& value(long long v) { return scalar(std::to_string(v)); }
    JsonWriter& value(unsigned long long v) { return scalar(std::to_string(v)); }
    JsonWriter& value(bool v) { return scalar(v ? "true" : "false"); }
    JsonWriter& value(std::string_view v) {
        std::string quoted = "\"";
        quoted += json_escape(v);
        quoted += '"';
        return scalar(quoted);
    }
    JsonWriter& value(const char* v) { return value(std::string_view(v)); }
    JsonWriter& null() { return scalar("null"); }

    // finished document, with trailing newline
    std::string str() const {
        if (!stack_.empty()) throw std::logic_error("JsonWriter: unclosed container");
        return out_ + "\n";
    }

private:
    enum class Kind { object, array };
    struct Frame {
        Kind kind;
        bool has_items;
        bool inline_items;
    };

    void require(Kind k, const char* what) const {
        if (stack_.empty() || stack_.back().kind != k)
            throw std::logic_error(std::string("JsonWriter: misplaced ") + what);
    }

    void indent() {
        out_.append(2 * stack_.size(), ' ');
    }

    void comma_and_newline() {
        if (stack_.back().has_items) out_ += ',';
        stack_.back().has_items = true;
        if (stack_.back().kind == Kind::array && stack_.back().inline_items) {
            if (out_.back() == ',') out_ += ' ';
        } else {
            out_ += '\n';
            indent();
        }
    }

    // called before any value or container start
    void prefix() {
        if (stack_.empty()) {
            if (!out_.empty()) throw std::logic_error("JsonWriter: multiple roots");
            return;
        }
        if (stack_.back().kind == Kind::object) {
            if (!pending_key_) throw std::logic_error("JsonWriter: value without key");
            pending_key_ = false;
            return;
        }
        comma_and_newline();
    }

    JsonWriter& scalar(std::string_view text) {
        prefix();
        out_ += text;
        return *this;
    }

    std::string out_;
    std::vector<Frame> stack_;
    bool pending_key_ = false;
};

inline std::string csv_join(const std::vector<std::string>& fields) {
    std::string row;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) row += ',';
        row += fields[i];
    }
    row += '\n';
    return row;
}

} // namespace mplab
