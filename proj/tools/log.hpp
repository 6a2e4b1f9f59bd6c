#pragma once

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

// Verbosity comes from the RESCALE_LOG environment variable:
// error | warn | info | debug (default warn).

namespace rescale::cli {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

inline LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("RESCALE_LOG");
        if (!env)
            return LogLevel::Warn;
        if (std::strcmp(env, "error") == 0)
            return LogLevel::Error;
        if (std::strcmp(env, "info") == 0)
            return LogLevel::Info;
        if (std::strcmp(env, "debug") == 0)
            return LogLevel::Debug;
        return LogLevel::Warn;
    }();
    return level;
}

inline void log_at(LogLevel lvl, const char* tag, const char* fmt, va_list args) {
    if (lvl > log_level())
        return;
    std::fprintf(stderr, "[%s] ", tag);
    std::vfprintf(stderr, fmt, args);
    std::fputc('\n', stderr);
}

#define RESCALE_DEFINE_LOG_FN(name, level, tag)                                                  \
    inline void name(const char* fmt, ...) {                                                     \
        va_list args;                                                                            \
        va_start(args, fmt);                                                                     \
        log_at(level, tag, fmt, args);                                                           \
        va_end(args);                                                                            \
    }

RESCALE_DEFINE_LOG_FN(log_error, LogLevel::Error, "error")
RESCALE_DEFINE_LOG_FN(log_warn, LogLevel::Warn, "warn")
RESCALE_DEFINE_LOG_FN(log_info, LogLevel::Info, "info")
RESCALE_DEFINE_LOG_FN(log_debug, LogLevel::Debug, "debug")

#undef RESCALE_DEFINE_LOG_FN

} // namespace rescale::cli
