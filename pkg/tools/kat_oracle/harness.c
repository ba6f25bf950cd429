#include <stdio.h>
#include <string.h>
#include <stdlib.h>
#include "sph_echo.h"
#include "sph_fugue.h"

static int unhex(const char *s, unsigned char *out) {
    int n = 0;
    while (s[0] && s[1]) { unsigned v; sscanf(s, "%2x", &v); out[n++] = v; s += 2; }
    return n;
}

int main(void) {
    char line[1 << 16];
    static unsigned char msg[1 << 15];
    while (fgets(line, sizeof line, stdin)) {
        char alg; unsigned long nbits; char hex[1 << 16];
        hex[0] = 0;
        if (sscanf(line, "%c %lu %s", &alg, &nbits, hex) < 2) continue;
        if (strcmp(hex, "-") == 0) hex[0] = 0;
        unhex(hex, msg);
        size_t nbytes = nbits / 8; unsigned rem = nbits % 8;
        unsigned char out[32];
        if (alg == 'E') {
            sph_echo256_context cc; sph_echo256_init(&cc);
            sph_echo256(&cc, msg, nbytes);
            sph_echo256_addbits_and_close(&cc, rem ? msg[nbytes] : 0, rem, out);
        } else {
            sph_fugue256_context cc; sph_fugue256_init(&cc);
            sph_fugue256(&cc, msg, nbytes);
            sph_fugue256_addbits_and_close(&cc, rem ? msg[nbytes] : 0, rem, out);
        }
        for (int i = 0; i < 32; i++) printf("%02x", out[i]);
        printf("\n"); fflush(stdout);
    }
    return 0;
}
