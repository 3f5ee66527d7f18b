#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "colpot/signature.hpp"

namespace colpot {

namespace {

namespace pt = boost::property_tree;

std::string attr(const pt::ptree& node, const std::string& name) {
    return node.get<std::string>("<xmlattr>." + name, "");
}

void collect_receiver_actions(const pt::ptree& receiver, AsrSignature& sig) {
    // A receiver with an intent filter is reachable from other apps unless
    // it explicitly opts out.
    if (attr(receiver, "android:exported") == "false") return;
    for (const auto& [name, child] : receiver) {
        if (name != "intent-filter") continue;
        for (const auto& [inner_name, inner] : child) {
            if (inner_name != "action") continue;
            std::string action = attr(inner, "android:name");
            if (!action.empty()) {
                sig.receives.insert(Channel{ChannelKind::Intent, action, false});
            }
        }
    }
}

}  // namespace

AsrSignature parse_manifest(std::string_view manifest_xml) {
    pt::ptree tree;
    try {
        std::istringstream stream{std::string(manifest_xml)};
        pt::read_xml(stream, tree);
    } catch (const pt::xml_parser_error& e) {
        throw ParseError(e.message(), "line " + std::to_string(e.line()));
    }

    const auto manifest = tree.get_child_optional("manifest");
    if (!manifest) {
        throw ParseError("missing <manifest> root element", "<xml>");
    }

    AsrSignature sig;
    sig.app = attr(*manifest, "package");

    for (const auto& [name, node] : *manifest) {
        if (name == "uses-permission") {
            std::string perm = strip_permission_prefix(attr(node, "android:name"));
            if (!perm.empty()) sig.permissions.insert(std::move(perm));
        } else if (name == "application") {
            for (const auto& [app_child_name, app_child] : node) {
                if (app_child_name == "receiver") {
                    collect_receiver_actions(app_child, sig);
                }
            }
        }
    }

    // Declared storage permissions imply use of the shared external-storage
    // channel: writers send through it, readers receive from it.
    if (sig.permissions.contains("WRITE_EXTERNAL_STORAGE")) {
        sig.sends.insert(Channel::external());
    }
    if (sig.permissions.contains("READ_EXTERNAL_STORAGE")) {
        sig.receives.insert(Channel::external());
    }
    return sig;
}

}  // namespace colpot
