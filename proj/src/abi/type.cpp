/*
   Copyright 2026 The Chainharvest Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <chainharvest/abi/type.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

#include <chainharvest/abi/error.hpp>

namespace chainharvest::abi {

namespace {

    constexpr std::size_t kMaxFixedArrayLength{1u << 16};

    [[noreturn]] void unsupported(std::string_view name, std::string_view why) {
        throw AbiError{AbiErrc::kUnsupportedType, "unsupported type '" + std::string{name} + "': " + std::string{why}};
    }

    std::optional<std::size_t> parse_number(std::string_view digits) {
        if (digits.empty() || (digits.size() > 1 && digits[0] == '0')) return std::nullopt;
        std::size_t n{0};
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
        if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
        return n;
    }

    class TypeParser {
      public:
        explicit TypeParser(std::string_view text) : text_{text} {}

        AbiType parse_all() {
            AbiType t = parse_type();
            if (pos_ != text_.size()) unsupported(text_, "trailing characters");
            return t;
        }

      private:
        AbiType parse_type() {
            AbiType t = peek() == '(' ? parse_tuple() : parse_elementary();
            while (peek() == '[') {
                ++pos_;
                const std::size_t close = text_.find(']', pos_);
                if (close == std::string_view::npos) unsupported(text_, "unterminated array suffix");
                const std::string_view digits = text_.substr(pos_, close - pos_);
                pos_ = close + 1;
                if (digits.empty()) {
                    t = AbiType::array(std::move(t));
                } else {
                    const auto n = parse_number(digits);
                    if (!n || *n == 0 || *n > kMaxFixedArrayLength) unsupported(text_, "bad array length");
                    t = AbiType::fixed_array(std::move(t), *n);
                }
            }
            return t;
        }

        AbiType parse_tuple() {
            ++pos_;  // '('
            std::vector<AbiType> components;
            if (peek() == ')') unsupported(text_, "empty tuple");
            while (true) {
                components.push_back(parse_type());
                const char c = peek();
                ++pos_;
                if (c == ')') break;
                if (c != ',') unsupported(text_, "expected ',' or ')' in tuple");
            }
            return AbiType::tuple(std::move(components));
        }

        AbiType parse_elementary() {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) != 0)) ++pos_;
            const std::string_view word = text_.substr(start, pos_ - start);
            if (word.empty()) unsupported(text_, "missing type name");
            if (word == "address") return AbiType::address();
            if (word == "bool") return AbiType::boolean();
            if (word == "string") return AbiType::string();
            if (word == "bytes") return AbiType::bytes();
            if (word == "byte") return AbiType::fixed_bytes(1);
            if (word == "uint") return AbiType::uint(256);
            if (word == "int") return AbiType::sint(256);
            if (word.starts_with("uint") || word.starts_with("int")) {
                const bool is_signed = word[0] == 'i';
                const auto bits = parse_number(word.substr(is_signed ? 3 : 4));
                if (!bits || *bits == 0 || *bits > 256 || *bits % 8 != 0) unsupported(text_, "invalid integer width");
                return is_signed ? AbiType::sint(static_cast<unsigned>(*bits)) : AbiType::uint(static_cast<unsigned>(*bits));
            }
            if (word.starts_with("bytes")) {
                const auto len = parse_number(word.substr(5));
                if (!len || *len == 0 || *len > 32) unsupported(text_, "invalid fixed bytes length");
                return AbiType::fixed_bytes(*len);
            }
            unsupported(text_, "unknown type name");
        }

        [[nodiscard]] char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

        std::string_view text_;
        std::size_t pos_{0};
    };

}  // namespace

AbiType::AbiType(Kind kind, std::size_t size, std::vector<AbiType> components)
    : kind_{kind}, size_{size}, components_{std::move(components)} {}

AbiType AbiType::uint(unsigned bits) { return {Kind::kUint, bits}; }
AbiType AbiType::sint(unsigned bits) { return {Kind::kInt, bits}; }
AbiType AbiType::address() { return {Kind::kAddress, 20}; }
AbiType AbiType::boolean() { return {Kind::kBool, 1}; }
AbiType AbiType::fixed_bytes(std::size_t length) { return {Kind::kFixedBytes, length}; }
AbiType AbiType::bytes() { return {Kind::kBytes, 0}; }
AbiType AbiType::string() { return {Kind::kString, 0}; }

AbiType AbiType::fixed_array(AbiType element, std::size_t length) {
    std::vector<AbiType> c;
    c.push_back(std::move(element));
    return {Kind::kFixedArray, length, std::move(c)};
}

AbiType AbiType::array(AbiType element) {
    std::vector<AbiType> c;
    c.push_back(std::move(element));
    return {Kind::kArray, 0, std::move(c)};
}

AbiType AbiType::tuple(std::vector<AbiType> components) { return {Kind::kTuple, components.size(), std::move(components)}; }

AbiType AbiType::parse(std::string_view name) {
    AbiType t = TypeParser{name}.parse_all();
    if (t.depth() > kMaxNestingDepth) {
        unsupported(name, "nesting deeper than " + std::to_string(kMaxNestingDepth));
    }
    return t;
}

std::string AbiType::canonical() const {
    switch (kind_) {
        case Kind::kUint:
            return "uint" + std::to_string(size_);
        case Kind::kInt:
            return "int" + std::to_string(size_);
        case Kind::kAddress:
            return "address";
        case Kind::kBool:
            return "bool";
        case Kind::kFixedBytes:
            return "bytes" + std::to_string(size_);
        case Kind::kBytes:
            return "bytes";
        case Kind::kString:
            return "string";
        case Kind::kFixedArray:
            return element().canonical() + "[" + std::to_string(size_) + "]";
        case Kind::kArray:
            return element().canonical() + "[]";
        case Kind::kTuple: {
            std::string out = "(";
            for (std::size_t i = 0; i < components_.size(); ++i) {
                if (i > 0) out += ',';
                out += components_[i].canonical();
            }
            return out + ")";
        }
    }
    return {};
}

bool AbiType::is_dynamic() const noexcept {
    switch (kind_) {
        case Kind::kBytes:
        case Kind::kString:
        case Kind::kArray:
            return true;
        case Kind::kFixedArray:
            return element().is_dynamic();
        case Kind::kTuple:
            return std::any_of(components_.begin(), components_.end(), [](const AbiType& c) { return c.is_dynamic(); });
        default:
            return false;
    }
}

std::size_t AbiType::head_size() const noexcept {
    if (is_dynamic()) return 32;
    switch (kind_) {
        case Kind::kFixedArray:
            return size_ * element().head_size();
        case Kind::kTuple: {
            std::size_t total{0};
            for (const auto& c : components_) total += c.head_size();
            return total;
        }
        default:
            return 32;
    }
}

std::size_t AbiType::depth() const noexcept {
    std::size_t inner{0};
    for (const auto& c : components_) inner = std::max(inner, c.depth());
    return components_.empty() ? 0 : inner + 1;
}

bool AbiType::is_value_type() const noexcept {
    switch (kind_) {
        case Kind::kUint:
        case Kind::kInt:
        case Kind::kAddress:
        case Kind::kBool:
        case Kind::kFixedBytes:
            return true;
        default:
            return false;
    }
}

}  // namespace chainharvest::abi
