#include <cstdio>

int main() {
    std::puts("porodiff: subcommands not wired up yet");
    return 1;
}
