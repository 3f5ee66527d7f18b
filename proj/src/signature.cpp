#include "colpot/signature.hpp"

#include <json.hpp>

namespace colpot {

namespace {

using nlohmann::json;

const char* kPermissionPrefix = "android.permission.";

std::string field_error(const std::string& path, const std::string& what) {
    return path + ": " + what;
}

}  // namespace

std::string to_string(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::Intent: return "intent";
        case ChannelKind::SharedPrefs: return "shared_prefs";
        case ChannelKind::ExternalStorage: return "external_storage";
    }
    return "intent";
}

std::optional<ChannelKind> channel_kind_from_string(std::string_view text) {
    if (text == "intent") return ChannelKind::Intent;
    if (text == "shared_prefs") return ChannelKind::SharedPrefs;
    if (text == "external_storage") return ChannelKind::ExternalStorage;
    return std::nullopt;
}

Channel Channel::external() { return Channel{ChannelKind::ExternalStorage, "EXTERNAL", false}; }

std::string to_string(Label label) {
    switch (label) {
        case Label::Malware: return "malware";
        case Label::Unwanted: return "unwanted";
        case Label::Clean: return "clean";
        case Label::Unlabeled: return "unlabeled";
    }
    return "unlabeled";
}

std::optional<Label> label_from_string(std::string_view text) {
    if (text == "malware") return Label::Malware;
    if (text == "unwanted") return Label::Unwanted;
    if (text == "clean") return Label::Clean;
    if (text == "unlabeled") return Label::Unlabeled;
    return std::nullopt;
}

ParseError::ParseError(const std::string& message, std::string where)
    : std::runtime_error(where.empty() ? message : where + ": " + message),
      where_(std::move(where)) {}

ValidationError::ValidationError(const std::string& message) : std::runtime_error(message) {}

std::string strip_permission_prefix(std::string permission) {
    if (permission.starts_with(kPermissionPrefix)) {
        permission.erase(0, std::string_view(kPermissionPrefix).size());
    }
    return permission;
}

namespace {

void validate_channel(const Channel& channel, const std::string& path) {
    if (channel.name.empty()) {
        throw ParseError("channel name must not be empty", path + ".name");
    }
    if (channel.kind == ChannelKind::ExternalStorage) {
        if (channel.name != "EXTERNAL") {
            throw ParseError("external_storage channels must be named \"EXTERNAL\"",
                             path + ".name");
        }
        if (channel.dynamic) {
            throw ParseError("external_storage channels cannot be dynamic", path + ".dynamic");
        }
    }
}

Channel parse_channel(const json& value, const std::string& path,
                      std::vector<std::string>* warnings) {
    if (!value.is_object()) {
        throw ParseError("expected an object", path);
    }
    Channel channel;
    bool saw_kind = false;
    bool saw_name = false;
    for (const auto& [key, item] : value.items()) {
        if (key == "kind") {
            if (!item.is_string()) throw ParseError("expected a string", path + ".kind");
            auto kind = channel_kind_from_string(item.get<std::string>());
            if (!kind) {
                throw ParseError("unknown channel kind \"" + item.get<std::string>() + "\"",
                                 path + ".kind");
            }
            channel.kind = *kind;
            saw_kind = true;
        } else if (key == "name") {
            if (!item.is_string()) throw ParseError("expected a string", path + ".name");
            channel.name = item.get<std::string>();
            saw_name = true;
        } else if (key == "dynamic") {
            if (!item.is_boolean()) throw ParseError("expected a boolean", path + ".dynamic");
            channel.dynamic = item.get<bool>();
        } else if (warnings) {
            warnings->push_back(field_error(path, "ignoring unknown key \"" + key + "\""));
        }
    }
    if (!saw_kind) throw ParseError("missing required field", path + ".kind");
    if (!saw_name) throw ParseError("missing required field", path + ".name");
    validate_channel(channel, path);
    return channel;
}

std::set<Channel> parse_channel_array(const json& value, const std::string& path,
                                      std::vector<std::string>* warnings) {
    if (!value.is_array()) {
        throw ParseError("expected an array", path);
    }
    std::set<Channel> channels;
    for (std::size_t i = 0; i < value.size(); ++i) {
        channels.insert(parse_channel(value[i], path + "[" + std::to_string(i) + "]", warnings));
    }
    return channels;
}

}  // namespace

AsrSignature parse_signature_json(std::string_view json_text,
                                  std::vector<std::string>* warnings) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), "<json>");
    }
    if (!doc.is_object()) {
        throw ParseError("expected a JSON object", "<json>");
    }

    AsrSignature sig;
    bool saw_app = false;
    for (const auto& [key, value] : doc.items()) {
        if (key == "app") {
            if (!value.is_string()) throw ParseError("expected a string", "app");
            sig.app = value.get<std::string>();
            saw_app = true;
        } else if (key == "label") {
            if (!value.is_string()) throw ParseError("expected a string", "label");
            auto label = label_from_string(value.get<std::string>());
            if (!label) {
                throw ParseError("unknown label \"" + value.get<std::string>() + "\"", "label");
            }
            sig.label = *label;
        } else if (key == "permissions") {
            if (!value.is_array()) throw ParseError("expected an array", "permissions");
            for (std::size_t i = 0; i < value.size(); ++i) {
                const std::string path = "permissions[" + std::to_string(i) + "]";
                if (!value[i].is_string()) throw ParseError("expected a string", path);
                std::string perm = strip_permission_prefix(value[i].get<std::string>());
                if (perm.empty()) throw ParseError("permission must not be empty", path);
                sig.permissions.insert(std::move(perm));
            }
        } else if (key == "sends") {
            sig.sends = parse_channel_array(value, "sends", warnings);
        } else if (key == "receives") {
            sig.receives = parse_channel_array(value, "receives", warnings);
        } else if (warnings) {
            warnings->push_back("ignoring unknown key \"" + key + "\"");
        }
    }
    if (!saw_app) throw ParseError("missing required field", "app");
    if (sig.app.empty()) throw ParseError("app id must not be empty", "app");
    return sig;
}

namespace {

json channel_to_json(const Channel& channel) {
    json value;
    value["dynamic"] = channel.dynamic;
    value["kind"] = to_string(channel.kind);
    value["name"] = channel.name;
    return value;
}

json channels_to_json(const std::set<Channel>& channels) {
    json array = json::array();
    for (const Channel& channel : channels) array.push_back(channel_to_json(channel));
    return array;
}

}  // namespace

std::string serialize_signature(const AsrSignature& sig) {
    json doc;
    doc["app"] = sig.app;
    doc["label"] = to_string(sig.label);
    doc["permissions"] = json::array();
    for (const std::string& perm : sig.permissions) doc["permissions"].push_back(perm);
    doc["receives"] = channels_to_json(sig.receives);
    doc["sends"] = channels_to_json(sig.sends);
    return doc.dump();
}

AsrSignature merge_signature(const AsrSignature& manifest_part, const AsrSignature& code_facts) {
    AsrSignature merged;
    if (!manifest_part.app.empty() && !code_facts.app.empty() &&
        manifest_part.app != code_facts.app) {
        throw ValidationError("app id mismatch: \"" + manifest_part.app + "\" vs \"" +
                              code_facts.app + "\"");
    }
    merged.app = manifest_part.app.empty() ? code_facts.app : manifest_part.app;
    if (merged.app.empty()) {
        throw ValidationError("merged signature has no app id");
    }
    merged.permissions = manifest_part.permissions;
    merged.permissions.insert(code_facts.permissions.begin(), code_facts.permissions.end());
    merged.sends = manifest_part.sends;
    merged.sends.insert(code_facts.sends.begin(), code_facts.sends.end());
    merged.receives = manifest_part.receives;
    merged.receives.insert(code_facts.receives.begin(), code_facts.receives.end());
    merged.label = code_facts.label;
    return merged;
}

}  // namespace colpot
