#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "colpot/signature.hpp"

namespace colpot {

// Abstract capability classes a permission can grant.
enum class HighLevelAction { SensitiveInfo, InformationOutside, Money, ControlService };

std::string to_string(HighLevelAction action);
std::optional<HighLevelAction> action_from_string(std::string_view text);

// Permission -> high-level action table.
//
// Text format, one entry per line:
//     PERMISSION: action[, action]*
// '#' starts a comment, blank lines are skipped, repeated permissions union
// their action sets. Valid action names: sensitive_info,
// information_outside, money, control_service.
class ActionMapping {
public:
    ActionMapping() = default;

    // Throws ParseError (with "line N") on a missing ':', an empty
    // permission or action list, or an unknown action name.
    static ActionMapping parse(std::string_view text);

    // The table shipped with the library. data/default_mapping.txt holds
    // the same content; default_text() is its exact source.
    static const ActionMapping& builtin_default();
    static std::string_view default_text();

    void add(std::string permission, HighLevelAction action);

    // Null when the permission has no entry.
    const std::set<HighLevelAction>* find(const std::string& permission) const;

    std::size_t size() const { return entries_.size(); }
    const std::map<std::string, std::set<HighLevelAction>>& entries() const { return entries_; }

private:
    std::map<std::string, std::set<HighLevelAction>> entries_;
};

// Union of the actions granted by every permission the app holds; unmapped
// permissions contribute nothing.
std::set<HighLevelAction> actions_of(const AsrSignature& sig, const ActionMapping& mapping);

}  // namespace colpot
