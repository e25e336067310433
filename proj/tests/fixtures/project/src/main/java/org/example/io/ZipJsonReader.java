package org.example.io;

import java.io.ByteArrayOutputStream;
import java.io.IOException;
import java.io.InputStream;
import java.nio.charset.StandardCharsets;
import java.util.Enumeration;
import java.util.LinkedHashMap;
import java.util.Map;
import java.util.zip.ZipEntry;
import java.util.zip.ZipFile;

import org.slf4j.Logger;
import org.slf4j.LoggerFactory;

public final class ZipJsonReader {
    private static final Logger log = LoggerFactory.getLogger(ZipJsonReader.class);

    private ZipJsonReader() {}

    /**
     * Reads json files from a zip and creates a map where for each entry the key is the file name
     * and value is the file content.
     *
     * @param zip an open archive
     * @return file name to content
     */
    public static Map<String, String> readJsonEntries(ZipFile zip) {
        Map<String, String> result = new LinkedHashMap<>();
        Enumeration<? extends ZipEntry> entries = zip.entries();
        while (entries.hasMoreElements()) {
            ZipEntry entry = entries.nextElement();
            if (entry.isDirectory() || !entry.getName().endsWith(".json")) {
                continue;
            }
            InputStream in = null;
            try {
                in = zip.getInputStream(entry);
                result.put(entry.getName(), new String(readAll(in), StandardCharsets.UTF_8));
            } catch (IOException e) {
                log.warn("skipping unreadable entry {}", entry.getName(), e);
            } finally {
                closeQuietly(in);
            }
        }
        return result;
    }

    /**
     * Drains a stream into a byte array using a fixed-size buffer.
     *
     * @param in the stream, left open
     * @return all remaining bytes
     * @throws IOException if reading fails
     */
    public static byte[] readAll(InputStream in) throws IOException {
        ByteArrayOutputStream out = new ByteArrayOutputStream();
        byte[] buffer = new byte[8192];
        int n;
        long total = 0;
        while ((n = in.read(buffer)) != -1) {
            out.write(buffer, 0, n);
            total += n;
            if (total > 64L * 1024 * 1024) {
                throw new IOException("entry larger than 64 MiB");
            }
        }
        log.debug("read {} bytes", total);
        return out.toByteArray();
    }

    /**
     * Counts the entries whose names end with the given suffix, ignoring case.
     */
    public static int countEntries(ZipFile zip, String suffix) {
        int count = 0;
        String wanted = suffix.toLowerCase();
        Enumeration<? extends ZipEntry> entries = zip.entries();
        while (entries.hasMoreElements()) {
            ZipEntry entry = entries.nextElement();
            if (entry.isDirectory()) {
                continue;
            }
            String name = entry.getName().toLowerCase();
            if (name.endsWith(wanted)) {
                count++;
            }
        }
        return count;
    }

    /**
     * Copies one entry to a byte array, or returns an empty array when the entry is missing.
     */
    public static byte[] entryBytes(ZipFile zip, String name) {
        ZipEntry entry = zip.getEntry(name);
        if (entry == null) {
            log.info("no entry named {}", name);
            return new byte[0];
        }
        try (InputStream in = zip.getInputStream(entry)) {
            return readAll(in);
        } catch (IOException e) {
            log.error("cannot read {}", name, e);
            return new byte[0];
        } finally {
            log.trace("done with {}", name);
        }
    }

    private static void closeQuietly(InputStream in) {
        if (in == null) return;
        try {
            in.close();
        } catch (IOException ignored) {
            // nothing useful to do
        }
    }
}
