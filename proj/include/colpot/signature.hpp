#pragma once

#include <compare>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace colpot {

// Communication channel kinds observable between Android apps.
enum class ChannelKind { Intent, SharedPrefs, ExternalStorage };

std::string to_string(ChannelKind kind);
std::optional<ChannelKind> channel_kind_from_string(std::string_view text);

// A named inter-app communication endpoint. Two channels refer to the same
// medium when kind and name are equal; `dynamic` marks names recovered from
// code analysis rather than literal constants (such names carry a "CG:"
// prefix by convention).
struct Channel {
    ChannelKind kind{ChannelKind::Intent};
    std::string name;
    bool dynamic{false};

    auto operator<=>(const Channel&) const = default;

    // The single shared external-storage channel.
    static Channel external();
};

// Ground-truth tag attached to a signature by the corpus provider.
enum class Label { Malware, Unwanted, Clean, Unlabeled };

std::string to_string(Label label);
std::optional<Label> label_from_string(std::string_view text);

// Access/send/receive signature of one app: the permissions it holds plus
// the channels it writes to and reads from.
struct AsrSignature {
    std::string app;
    std::set<std::string> permissions;  // canonical names, no "android.permission." prefix
    std::set<Channel> sends;
    std::set<Channel> receives;
    Label label{Label::Unlabeled};

    bool operator==(const AsrSignature&) const = default;
};

// Input validation failure. `where()` names the offending location: a JSON
// field path ("sends[2].kind"), a line reference ("line 14"), or a file.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::string where);
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

// Semantic input errors that are not tied to one source location
// (duplicate app ids, invalid parameter combinations, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& message);
};

// Parses one signature JSON object. Unknown keys are ignored; when
// `warnings` is non-null a note per ignored key is appended. Throws
// ParseError on malformed JSON, wrong types, a missing/empty "app", an
// unknown kind/label, or an external-storage channel whose name is not
// "EXTERNAL" or that claims to be dynamic.
AsrSignature parse_signature_json(std::string_view json_text,
                                  std::vector<std::string>* warnings = nullptr);

// Canonical single-line JSON: keys sorted, arrays in set order. Satisfies
// parse(serialize(sig)) == sig and serialize(parse(x)) is a fixed point.
std::string serialize_signature(const AsrSignature& sig);

// Extracts the manifest-visible part of a signature from a plaintext
// AndroidManifest.xml: declared permissions, intent receive channels for
// every <action> inside an <intent-filter> of an exported <receiver>
// (android:exported="false" opts out; a filter implies exported), and
// external-storage send/receive channels for WRITE_/READ_EXTERNAL_STORAGE.
// Throws ParseError with a line reference on malformed XML.
AsrSignature parse_manifest(std::string_view manifest_xml);

// Unions two partial signatures for the same app. An empty app id on one
// side is treated as unset; differing non-empty ids raise ValidationError.
// The label is taken from `code_facts`.
AsrSignature merge_signature(const AsrSignature& manifest_part,
                             const AsrSignature& code_facts);

// Drops a leading "android.permission." if present.
std::string strip_permission_prefix(std::string permission);

}  // namespace colpot
