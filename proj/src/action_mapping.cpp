#include "colpot/action_mapping.hpp"

#include <sstream>

namespace colpot {

namespace {

// Shipped copy: data/default_mapping.txt carries this exact text.
constexpr std::string_view kDefaultMappingText =
    R"MAP(# Default permission -> high-level action table.
# Format: PERMISSION: action[, action]*
# Actions: sensitive_info, information_outside, money, control_service

# --- reading or observing device and user data ---
ACCESS_COARSE_LOCATION: sensitive_info
ACCESS_FINE_LOCATION: sensitive_info
ACCESS_LOCATION_EXTRA_COMMANDS: sensitive_info
ACCESS_NETWORK_STATE: sensitive_info
ACCESS_WIFI_STATE: sensitive_info
AUTHENTICATE_ACCOUNTS: sensitive_info
BATTERY_STATS: sensitive_info
BLUETOOTH: sensitive_info, information_outside
CAMERA: sensitive_info
DUMP: sensitive_info
GET_ACCOUNTS: sensitive_info
READ_CALENDAR: sensitive_info
READ_CALL_LOG: sensitive_info
READ_CONTACTS: sensitive_info
READ_EXTERNAL_STORAGE: sensitive_info
READ_FRAME_BUFFER: sensitive_info
READ_HISTORY_BOOKMARKS: sensitive_info
READ_LOGS: sensitive_info
READ_PHONE_STATE: sensitive_info
READ_PROFILE: sensitive_info
READ_SMS: sensitive_info
READ_SOCIAL_STREAM: sensitive_info
READ_USER_DICTIONARY: sensitive_info
RECEIVE_MMS: sensitive_info
RECEIVE_SMS: sensitive_info
RECEIVE_WAP_PUSH: sensitive_info
RECORD_AUDIO: sensitive_info
SUBSCRIBED_FEEDS_READ: sensitive_info

# --- moving information off the device ---
BLUETOOTH_ADMIN: information_outside
CHANGE_NETWORK_STATE: information_outside
CHANGE_WIFI_MULTICAST_STATE: information_outside
CHANGE_WIFI_STATE: information_outside
INTERNET: information_outside
NFC: information_outside
WRITE_EXTERNAL_STORAGE: sensitive_info, information_outside

# --- costing the user money ---
CALL_PHONE: money
SEND_SMS: money, information_outside
USE_SIP: money, information_outside

# --- controlling device services and state ---
BROADCAST_STICKY: control_service
CHANGE_CONFIGURATION: control_service
CLEAR_APP_CACHE: control_service
DELETE_CACHE_FILES: control_service
DISABLE_KEYGUARD: control_service
EXPAND_STATUS_BAR: control_service
FLASHLIGHT: control_service
GET_TASKS: control_service
KILL_BACKGROUND_PROCESSES: control_service
MANAGE_ACCOUNTS: control_service
MODIFY_AUDIO_SETTINGS: control_service
MODIFY_PHONE_STATE: control_service
MOUNT_FORMAT_FILESYSTEMS: control_service
MOUNT_UNMOUNT_FILESYSTEMS: control_service
PERSISTENT_ACTIVITY: control_service
PROCESS_OUTGOING_CALLS: control_service
RECEIVE_BOOT_COMPLETED: control_service
REORDER_TASKS: control_service
RESTART_PACKAGES: control_service
SET_ALARM: control_service
SET_ANIMATION_SCALE: control_service
SET_TIME: control_service
SET_TIME_ZONE: control_service
SET_WALLPAPER: control_service
SET_WALLPAPER_HINTS: control_service
SUBSCRIBED_FEEDS_WRITE: control_service
SYSTEM_ALERT_WINDOW: control_service
USE_CREDENTIALS: control_service
VIBRATE: control_service
WAKE_LOCK: control_service
WRITE_CALENDAR: control_service
WRITE_CALL_LOG: control_service
WRITE_CONTACTS: control_service
WRITE_HISTORY_BOOKMARKS: control_service
WRITE_PROFILE: control_service
WRITE_SECURE_SETTINGS: control_service
WRITE_SETTINGS: control_service
WRITE_SMS: control_service
WRITE_USER_DICTIONARY: control_service
)MAP";

std::string trim(std::string_view text) {
    std::size_t begin = text.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return "";
    std::size_t end = text.find_last_not_of(" \t\r");
    return std::string(text.substr(begin, end - begin + 1));
}

bool has_whitespace(const std::string& text) {
    return text.find_first_of(" \t") != std::string::npos;
}

}  // namespace

std::string to_string(HighLevelAction action) {
    switch (action) {
        case HighLevelAction::SensitiveInfo: return "sensitive_info";
        case HighLevelAction::InformationOutside: return "information_outside";
        case HighLevelAction::Money: return "money";
        case HighLevelAction::ControlService: return "control_service";
    }
    return "sensitive_info";
}

std::optional<HighLevelAction> action_from_string(std::string_view text) {
    if (text == "sensitive_info") return HighLevelAction::SensitiveInfo;
    if (text == "information_outside") return HighLevelAction::InformationOutside;
    if (text == "money") return HighLevelAction::Money;
    if (text == "control_service") return HighLevelAction::ControlService;
    return std::nullopt;
}

ActionMapping ActionMapping::parse(std::string_view text) {
    ActionMapping mapping;
    std::istringstream stream{std::string(text)};
    std::string raw_line;
    for (int line_no = 1; std::getline(stream, raw_line); ++line_no) {
        const std::string where = "line " + std::to_string(line_no);
        std::string line = raw_line;
        if (std::size_t hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t colon = line.find(':');
        if (colon == std::string::npos) {
            throw ParseError("missing ':' separator", where);
        }
        const std::string permission = trim(line.substr(0, colon));
        if (permission.empty()) {
            throw ParseError("empty permission name", where);
        }
        if (has_whitespace(permission)) {
            throw ParseError("permission name must not contain whitespace", where);
        }

        std::string rest = line.substr(colon + 1);
        bool any_action = false;
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            std::size_t comma = rest.find(',', pos);
            std::string piece =
                trim(comma == std::string::npos ? rest.substr(pos) : rest.substr(pos, comma - pos));
            if (piece.empty()) {
                if (comma == std::string::npos && !any_action) break;  // handled below
                throw ParseError("empty action name", where);
            }
            auto action = action_from_string(piece);
            if (!action) {
                throw ParseError("unknown action \"" + piece + "\"", where);
            }
            mapping.add(permission, *action);
            any_action = true;
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (!any_action) {
            throw ParseError("empty action list", where);
        }
    }
    return mapping;
}

const ActionMapping& ActionMapping::builtin_default() {
    static const ActionMapping mapping = ActionMapping::parse(kDefaultMappingText);
    return mapping;
}

std::string_view ActionMapping::default_text() { return kDefaultMappingText; }

void ActionMapping::add(std::string permission, HighLevelAction action) {
    entries_[std::move(permission)].insert(action);
}

const std::set<HighLevelAction>* ActionMapping::find(const std::string& permission) const {
    auto it = entries_.find(permission);
    return it == entries_.end() ? nullptr : &it->second;
}

std::set<HighLevelAction> actions_of(const AsrSignature& sig, const ActionMapping& mapping) {
    std::set<HighLevelAction> actions;
    for (const std::string& permission : sig.permissions) {
        if (const auto* entry = mapping.find(permission)) {
            actions.insert(entry->begin(), entry->end());
        }
    }
    return actions;
}

}  // namespace colpot
