#include <stdio.h>
#include <string.h>
#include <stdlib.h>
#include "echo.c"
#include "fugue.c"

static int unhex(const char *s, unsigned char *out) {
    int n = 0;
    while (s[0] && s[1]) { unsigned v; sscanf(s, "%2x", &v); out[n++] = v; s += 2; }
    return n;
}
static void smix4(sph_u32 *x) { sph_u32 x0=x[0],x1=x[1],x2=x[2],x3=x[3]; SMIX(x0,x1,x2,x3); x[0]=x0;x[1]=x1;x[2]=x2;x[3]=x3; }

int main(void) {
    char line[1 << 16];
    static unsigned char buf[1 << 15];
    while (fgets(line, sizeof line, stdin)) {
        char alg; char a[1<<15], b[1<<15]; unsigned long long ctr;
        if (line[0] == 'C') {
            /* C <V 64B hex> <M 192B hex> <counter> */
            sscanf(line, "%c %s %s %llu", &alg, a, b, &ctr);
            sph_echo256_context cc; sph_echo256_init(&cc);
            unhex(a, buf); memcpy(cc.u.Vs, buf, 64);
            unhex(b, cc.buf);
            cc.C0 = (sph_u32)ctr; cc.C1 = (sph_u32)(ctr >> 32); cc.C2 = cc.C3 = 0;
            echo_small_compress(&cc);
            unsigned char *v = (unsigned char *)cc.u.Vs;
            for (int i = 0; i < 64; i++) printf("%02x", v[i]);
            printf("\n");
        } else if (line[0] == 'S') {
            sph_u32 x[4];
            sscanf(line, "%c %x %x %x %x", &alg, &x[0], &x[1], &x[2], &x[3]);
            smix4(x);
            printf("%08x %08x %08x %08x\n", x[0], x[1], x[2], x[3]);
        }
        fflush(stdout);
    }
    return 0;
}
